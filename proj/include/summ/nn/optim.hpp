#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "summ/nn/params.hpp"

namespace summ::nn {

/// Inverse-sqrt schedule with linear warmup.
struct LrSchedule {
  double base = 2e-3;
  int warmup_steps = 10000;

  double lr_at(long step) const {
    if (step < 1) throw std::invalid_argument("lr schedule step must be >= 1");
    double s = static_cast<double>(step);
    double w = static_cast<double>(warmup_steps);
    return base * std::min(1.0 / std::sqrt(s), s / (w * std::sqrt(w)));
  }
};

/// Scales gradients of all given parameters so their joint L2 norm is at
/// most `threshold`. Returns the pre-clip norm.
template <class S>
double clip_global_norm(const std::vector<Parameter<S>*>& params,
                        double threshold) {
  if (threshold <= 0) throw std::invalid_argument("clip threshold must be > 0");
  double sq = 0;
  for (auto* p : params) sq += static_cast<double>(p->grad.squaredNorm());
  double norm = std::sqrt(sq);
  if (norm > threshold) {
    S k = static_cast<S>(threshold / norm);
    for (auto* p : params) p->grad *= k;
  }
  return norm;
}

template <class S>
class Adam {
 public:
  Adam(std::vector<Parameter<S>*> params, double beta1 = 0.9,
       double beta2 = 0.999, double eps = 1e-8)
      : params_(std::move(params)), beta1_(beta1), beta2_(beta2), eps_(eps) {
    for (auto* p : params_) {
      m_.push_back(Mat<S>::Zero(p->value.rows(), p->value.cols()));
      v_.push_back(Mat<S>::Zero(p->value.rows(), p->value.cols()));
    }
  }

  void step(double lr) {
    ++t_;
    double bc1 = 1.0 - std::pow(beta1_, t_);
    double bc2 = 1.0 - std::pow(beta2_, t_);
    for (size_t i = 0; i < params_.size(); ++i) {
      Parameter<S>& p = *params_[i];
      m_[i] = static_cast<S>(beta1_) * m_[i] + static_cast<S>(1 - beta1_) * p.grad;
      v_[i] = (static_cast<S>(beta2_) * v_[i].array() +
               static_cast<S>(1 - beta2_) * p.grad.array().square())
                  .matrix();
      auto mhat = m_[i].array() / static_cast<S>(bc1);
      auto vhat = v_[i].array() / static_cast<S>(bc2);
      p.value.array() -=
          static_cast<S>(lr) * mhat / (vhat.sqrt() + static_cast<S>(eps_));
    }
  }

  void zero_grad() {
    for (auto* p : params_) p->zero_grad();
  }

  long steps_taken() const { return t_; }
  const std::vector<Parameter<S>*>& params() const { return params_; }

 private:
  std::vector<Parameter<S>*> params_;
  double beta1_, beta2_, eps_;
  long t_ = 0;
  std::vector<Mat<S>> m_, v_;
};

}  // namespace summ::nn
