#pragma once

#include "bbpyr/analysis.hpp"
#include "bbpyr/assembly.hpp"
#include "bbpyr/element_bases.hpp"
#include "bbpyr/errors.hpp"
#include "bbpyr/geometry.hpp"
#include "bbpyr/polynomials.hpp"
#include "bbpyr/quadrature.hpp"
#include "bbpyr/verify.hpp"
