#pragma once

#include <span>
#include <vector>

#include "bfa/cube_function.hpp"

namespace bfa {

namespace detail {

// Multilinear fold of a 2^n table at x: repeatedly averages coordinate pairs
// with weights (1 -+ x_i)/2. Exact, O(2^n), no allocation beyond `scratch`.
double fold_eval(std::span<const double> table, std::span<const double> x,
                 std::vector<double>& scratch);

void check_point(std::span<const double> x, int n);

}  // namespace detail

// Value of the unique multilinear polynomial agreeing with f on the cube
// vertices. Requires every |x_i| <= 1.
double eval_extension(const CubeFunction& f, std::span<const double> x);

// Component i equals eval_extension(derivative(f, i), x).
std::vector<double> gradient_extension(const CubeFunction& f,
                                       std::span<const double> x);

// Squared Hilbert-Schmidt norm of the Hessian of the extension at x.
// Diagonal entries vanish by multilinearity.
double hessian_hs_sq(const CubeFunction& f, std::span<const double> x);

}  // namespace bfa
