#include "bfa/extension.hpp"

#include <cmath>

namespace bfa {

namespace detail {

void check_point(std::span<const double> x, int n) {
  if (static_cast<int>(x.size()) != n)
    throw spec_error("point dimension does not match function dimension");
  for (double xi : x)
    if (!(std::fabs(xi) <= 1.0))
      throw std::domain_error("extension point coordinate outside [-1,1]");
}

double fold_eval(std::span<const double> table, std::span<const double> x,
                 std::vector<double>& scratch) {
  scratch.assign(table.begin(), table.end());
  std::size_t size = table.size();
  for (double xi : x) {
    const double wm = 0.5 * (1.0 - xi);
    const double wp = 0.5 * (1.0 + xi);
    size /= 2;
    for (std::size_t j = 0; j < size; ++j)
      scratch[j] = wm * scratch[2 * j] + wp * scratch[2 * j + 1];
  }
  return scratch[0];
}

}  // namespace detail

double eval_extension(const CubeFunction& f, std::span<const double> x) {
  detail::check_point(x, f.dim());
  std::vector<double> scratch;
  return detail::fold_eval(f.values(), x, scratch);
}

std::vector<double> gradient_extension(const CubeFunction& f,
                                       std::span<const double> x) {
  detail::check_point(x, f.dim());
  std::vector<double> grad(f.dim());
  std::vector<double> scratch;
  for (int i = 0; i < f.dim(); ++i) {
    CubeFunction d = derivative(f, i);
    grad[i] = detail::fold_eval(d.values(), x, scratch);
  }
  return grad;
}

double hessian_hs_sq(const CubeFunction& f, std::span<const double> x) {
  detail::check_point(x, f.dim());
  double sum = 0.0;
  std::vector<double> scratch;
  for (int i = 0; i < f.dim(); ++i) {
    CubeFunction di = derivative(f, i);
    for (int j = i + 1; j < f.dim(); ++j) {
      CubeFunction dij = derivative(di, j);
      const double v = detail::fold_eval(dij.values(), x, scratch);
      sum += 2.0 * v * v;  // (i,j) and (j,i) entries coincide
    }
  }
  return sum;
}

}  // namespace bfa
