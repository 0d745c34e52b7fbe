#pragma once

#include "core.hpp"
#include "parallel.hpp"
#include "jet.hpp"
#include "quadrature.hpp"
#include "kernels.hpp"
#include "basis.hpp"
#include "dissipation.hpp"
#include "forms.hpp"
#include "spectral.hpp"
#include "bounds.hpp"
