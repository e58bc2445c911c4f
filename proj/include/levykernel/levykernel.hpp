#pragma once

#include "levykernel/approximation.hpp"
#include "levykernel/error.hpp"
#include "levykernel/mellin.hpp"
#include "levykernel/normalization.hpp"
#include "levykernel/oracle.hpp"
#include "levykernel/parallel.hpp"
#include "levykernel/quadrature.hpp"
#include "levykernel/radial_symbol.hpp"
#include "levykernel/specfun.hpp"
#include "levykernel/stable_kernel.hpp"
