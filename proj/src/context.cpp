#include "bfa/context.hpp"

#include <bit>
#include <cmath>

#include "bfa/extension.hpp"

namespace bfa {

double horner(std::span<const double> coeffs, double t) {
  double v = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 0;) v = v * t + coeffs[k];
  return v;
}

FunctionContext::FunctionContext(CubeFunction f)
    : f_(std::move(f)),
      fhat_(wht_forward(f_)),
      levels_(level_weights(fhat_)),
      stats_(spectral_stats(f_)) {
  if (dim() > max_derivative_dim) return;
  auto data = std::make_shared<DerivativeData>();
  data->deriv_tables.reserve(dim());
  for (int i = 0; i < dim(); ++i) {
    CubeFunction d = derivative(f_, i);
    CubeFunction a = abs_derivative(f_, i);
    data->deriv_hat.push_back(wht_forward(d));
    data->absderiv_hat.push_back(wht_forward(a));
    data->deriv_levels.push_back(level_weights(data->deriv_hat.back()));
    data->absderiv_levels.push_back(level_weights(data->absderiv_hat.back()));
    data->deriv_tables.push_back(d.values());
    data->absderiv_tables.push_back(a.values());
  }
  deriv_ = std::move(data);
}

const FunctionContext::DerivativeData& FunctionContext::deriv() const {
  if (!deriv_)
    throw capacity_error(
        "derivative machinery unavailable above dimension " +
        std::to_string(max_derivative_dim));
  return *deriv_;
}

const std::vector<double>& FunctionContext::derivative_table(int i) const {
  return deriv().deriv_tables[i];
}
const std::vector<double>& FunctionContext::abs_derivative_table(int i) const {
  return deriv().absderiv_tables[i];
}
const FourierExpansion& FunctionContext::derivative_expansion(int i) const {
  return deriv().deriv_hat[i];
}
const FourierExpansion& FunctionContext::abs_derivative_expansion(int i) const {
  return deriv().absderiv_hat[i];
}
const LevelWeights& FunctionContext::derivative_levels(int i) const {
  return deriv().deriv_levels[i];
}
const LevelWeights& FunctionContext::abs_derivative_levels(int i) const {
  return deriv().absderiv_levels[i];
}

double FunctionContext::value_at(std::span<const double> x,
                                 Workspace& ws) const {
  return detail::fold_eval(f_.values(), x, ws.fold);
}

double FunctionContext::derivative_at(int i, std::span<const double> x,
                                      Workspace& ws) const {
  return detail::fold_eval(derivative_table(i), x, ws.fold);
}

double FunctionContext::abs_derivative_at(int i, std::span<const double> x,
                                          Workspace& ws) const {
  return detail::fold_eval(abs_derivative_table(i), x, ws.fold);
}

double FunctionContext::time_variance(double t) const {
  return levels_.curve(t) - levels_.w[0];
}

double FunctionContext::psi(int i, double t) const {
  return abs_derivative_levels(i).curve(t);
}

double FunctionContext::gradient_moment(double t) const {
  double sum = 0.0;
  for (int i = 0; i < dim(); ++i) sum += derivative_levels(i).curve(t);
  return sum;
}

double FunctionContext::noise_stability(double eps) const {
  return levels_.noise_form(1.0 - eps);
}

double FunctionContext::weighted_time_integral(const LevelWeights& lw,
                                               double t1, double t2) {
  // 2 int t * sum_k W[k] t^{2k} dt = sum_k W[k] (t2^{2k+2} - t1^{2k+2})/(k+1)
  double sum = 0.0;
  double p1 = t1 * t1, p2 = t2 * t2;  // t^{2k+2}
  for (std::size_t k = 0; k < lw.w.size(); ++k) {
    sum += lw.w[k] * (p2 - p1) / static_cast<double>(k + 1);
    p1 *= t1 * t1;
    p2 *= t2 * t2;
  }
  return sum;
}

double FunctionContext::qv_correction(double eps) const {
  double sum = 0.0;
  for (int i = 0; i < dim(); ++i)
    sum += weighted_time_integral(derivative_levels(i), 0.0, eps);
  return sum;
}

void FunctionContext::signed_poly(const FourierExpansion& e,
                                  std::uint32_t negmask,
                                  std::span<double> out) const {
  for (auto& v : out) v = 0.0;
  for (std::uint32_t s = 0; s < e.size(); ++s) {
    const double c = e.coeffs[s];
    const int sign = std::popcount(s & negmask) & 1;
    out[std::popcount(s)] += sign ? -c : c;
  }
}

void FunctionContext::prepare(Workspace& ws) const {
  const int n = dim();
  ws.fold.reserve(f_.size());
  ws.point.assign(n, 0.0);
  ws.poly_f.assign(n + 1, 0.0);
  ws.poly_one.assign(n + 1, 0.0);
  ws.poly_d.assign(static_cast<std::size_t>(n) * (n + 1), 0.0);
  ws.poly_a.assign(static_cast<std::size_t>(n) * (n + 1), 0.0);
}

}  // namespace bfa
