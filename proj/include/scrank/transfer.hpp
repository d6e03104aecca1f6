#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "errors.hpp"
#include "normal.hpp"

namespace scrank {

enum class ScoreKind { celebrity, spammer };

// Soft threshold F(x) = Phi((x - mu)/sigma): strictly increasing, C^1,
// range (0,1), with closed-form inverse, antiderivative-of-inverse, and
// global derivative bound.
class TransferFunction {
 public:
  TransferFunction(double mu, double sigma, ScoreKind kind = ScoreKind::celebrity)
      : mu_(mu), sigma_(sigma), kind_(kind) {
    if (!(sigma_ > 0.0)) throw invalid_input_error("transfer function needs sigma > 0");
    if (!(mu_ >= 0.0)) throw invalid_input_error("transfer function needs mu >= 0");
  }

  double mu() const { return mu_; }
  double sigma() const { return sigma_; }
  ScoreKind kind() const { return kind_; }

  double operator()(double x) const { return std_normal_cdf((x - mu_) / sigma_); }

  // Defined on (0,1); returns -inf/+inf at the endpoints.
  double inverse(double q) const { return mu_ + sigma_ * std_normal_quantile(q); }

  // g(x) = integral of inverse(t) dt from 0 to x, in closed form:
  // mu*x - sigma*pdf(quantile(x)), with the endpoint limits g(0)=0, g(1)=mu.
  double g(double x) const {
    if (!(x >= 0.0 && x <= 1.0)) throw invalid_input_error("g(x) needs x in [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return mu_;
    return mu_ * x - sigma_ * std_normal_pdf(std_normal_quantile(x));
  }

  long double g_l(long double x) const {
    if (!(x >= 0.0L && x <= 1.0L)) throw invalid_input_error("g(x) needs x in [0,1]");
    if (x == 0.0L) return 0.0L;
    if (x == 1.0L) return mu_;
    return static_cast<long double>(mu_) * x -
           static_cast<long double>(sigma_) * std_normal_pdf_l(std_normal_quantile_l(x));
  }

  // Global maximum of F' = 1/(sigma*sqrt(2*pi)).
  double lipschitz_bound() const { return kInvSqrt2Pi / sigma_; }

 private:
  double mu_;
  double sigma_;
  ScoreKind kind_;
};

// A transfer function per vertex: either one function for all vertices or a
// full per-vertex table (for vertex-dependent thresholds).
class TransferField {
 public:
  explicit TransferField(TransferFunction uniform) : uniform_(uniform) {}

  TransferField(TransferFunction fallback, std::vector<TransferFunction> per_vertex)
      : uniform_(fallback), per_vertex_(std::move(per_vertex)) {}

  const TransferFunction& operator[](std::size_t v) const {
    return per_vertex_.empty() ? uniform_ : per_vertex_[v];
  }

  bool is_uniform() const { return per_vertex_.empty(); }
  std::size_t per_vertex_size() const { return per_vertex_.size(); }

  double max_lipschitz() const {
    double best = per_vertex_.empty() ? uniform_.lipschitz_bound() : 0.0;
    for (const TransferFunction& f : per_vertex_) {
      best = std::max(best, f.lipschitz_bound());
    }
    return best;
  }

 private:
  TransferFunction uniform_;
  std::vector<TransferFunction> per_vertex_;
};

}  // namespace scrank
