#pragma once

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "summ/rng.hpp"

namespace summ::nn {

template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

template <class S>
struct Parameter {
  std::string name;
  Mat<S> value;
  Mat<S> grad;

  void zero_grad() { grad.setZero(); }
};

template <class S>
class ParamStore {
 public:
  Parameter<S>& add(const std::string& name, int rows, int cols) {
    if (by_name_.count(name))
      throw std::invalid_argument("duplicate parameter: " + name);
    auto p = std::make_unique<Parameter<S>>();
    p->name = name;
    p->value = Mat<S>::Zero(rows, cols);
    p->grad = Mat<S>::Zero(rows, cols);
    Parameter<S>* raw = p.get();
    order_.push_back(std::move(p));
    by_name_[name] = raw;
    return *raw;
  }

  Parameter<S>& at(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end())
      throw std::out_of_range("no such parameter: " + name);
    return *it->second;
  }

  bool has(const std::string& name) const { return by_name_.count(name) > 0; }

  std::vector<Parameter<S>*> all() const {
    std::vector<Parameter<S>*> out;
    out.reserve(order_.size());
    for (const auto& p : order_) out.push_back(p.get());
    return out;
  }

  void zero_grad() {
    for (const auto& p : order_) p->zero_grad();
  }

  size_t size() const { return order_.size(); }

 private:
  std::vector<std::unique_ptr<Parameter<S>>> order_;
  std::map<std::string, Parameter<S>*> by_name_;
};

// Fill order is row-major so layouts reproduce across scalar types.
template <class S>
void init_uniform(Parameter<S>& p, Rng& rng, double lo, double hi) {
  for (int r = 0; r < p.value.rows(); ++r)
    for (int c = 0; c < p.value.cols(); ++c)
      p.value(r, c) = static_cast<S>(rng.uniform(lo, hi));
}

template <class S>
void init_normal(Parameter<S>& p, Rng& rng, double sd) {
  for (int r = 0; r < p.value.rows(); ++r)
    for (int c = 0; c < p.value.cols(); ++c)
      p.value(r, c) = static_cast<S>(rng.normal(0.0, sd));
}

}  // namespace summ::nn
