#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "summ/nn/params.hpp"

namespace summ::nn {

template <class S>
class Tape;

template <class S>
struct Expr {
  Tape<S>* tape = nullptr;
  int id = -1;

  const Mat<S>& val() const { return tape->node(id).val; }
  int rows() const { return static_cast<int>(val().rows()); }
  int cols() const { return static_cast<int>(val().cols()); }
};

namespace detail {
inline std::string shape_str(long r, long c) {
  return std::to_string(r) + "x" + std::to_string(c);
}
template <class S>
std::string shape_str(const Mat<S>& m) {
  return shape_str(m.rows(), m.cols());
}
}  // namespace detail

// Reverse-mode tape. Nodes are created in topological order; backward walks
// them in reverse. Parameter gradients accumulate until zero_grad.
template <class S>
class Tape {
 public:
  struct Node {
    Mat<S> val;
    Mat<S> grad;
    std::function<void(Tape&, const Mat<S>&)> back;
  };

  Expr<S> make(Mat<S> val, std::function<void(Tape&, const Mat<S>&)> back) {
    Node n;
    n.grad = Mat<S>::Zero(val.rows(), val.cols());
    n.val = std::move(val);
    n.back = std::move(back);
    nodes_.push_back(std::move(n));
    return Expr<S>{this, static_cast<int>(nodes_.size()) - 1};
  }

  Node& node(int id) { return nodes_[id]; }
  const Node& node(int id) const { return nodes_[id]; }
  size_t size() const { return nodes_.size(); }

  void accumulate(int id, const Mat<S>& g) { nodes_[id].grad += g; }

  void backward(Expr<S> loss) {
    if (loss.tape != this) throw std::invalid_argument("loss from another tape");
    const auto& lv = nodes_[loss.id].val;
    if (lv.rows() != 1 || lv.cols() != 1)
      throw std::invalid_argument("backward needs a scalar loss, got " +
                                  detail::shape_str(lv));
    nodes_[loss.id].grad(0, 0) += S(1);
    for (int id = loss.id; id >= 0; --id) {
      Node& n = nodes_[id];
      if (n.back) n.back(*this, n.grad);
    }
  }

 private:
  std::vector<Node> nodes_;
};

// ---- leaves ----

template <class S, class Derived>
Expr<S> constant(Tape<S>& t, const Eigen::MatrixBase<Derived>& v) {
  Mat<S> m = v;
  return t.make(std::move(m), nullptr);
}

template <class S>
Expr<S> scalar_const(Tape<S>& t, double v) {
  Mat<S> m(1, 1);
  m(0, 0) = static_cast<S>(v);
  return t.make(std::move(m), nullptr);
}

template <class S>
Expr<S> leaf(Tape<S>& t, Parameter<S>& p) {
  Parameter<S>* pp = &p;
  return t.make(p.value, [pp](Tape<S>&, const Mat<S>& g) { pp->grad += g; });
}

// ---- arithmetic ----

template <class S>
Expr<S> matmul(Expr<S> a, Expr<S> b) {
  if (a.cols() != b.rows())
    throw std::invalid_argument("matmul shape mismatch: " +
                                detail::shape_str(a.val()) + " * " +
                                detail::shape_str(b.val()));
  Tape<S>& t = *a.tape;
  Mat<S> y = a.val() * b.val();
  int ia = a.id, ib = b.id;
  return t.make(std::move(y), [ia, ib](Tape<S>& t, const Mat<S>& g) {
    t.accumulate(ia, g * t.node(ib).val.transpose());
    t.accumulate(ib, t.node(ia).val.transpose() * g);
  });
}

template <class S>
void check_same_shape(Expr<S> a, Expr<S> b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument(std::string(op) + " shape mismatch: " +
                                detail::shape_str(a.val()) + " vs " +
                                detail::shape_str(b.val()));
}

template <class S>
Expr<S> add(Expr<S> a, Expr<S> b) {
  check_same_shape(a, b, "add");
  Tape<S>& t = *a.tape;
  int ia = a.id, ib = b.id;
  return t.make(a.val() + b.val(), [ia, ib](Tape<S>& t, const Mat<S>& g) {
    t.accumulate(ia, g);
    t.accumulate(ib, g);
  });
}

template <class S>
Expr<S> sub(Expr<S> a, Expr<S> b) {
  check_same_shape(a, b, "sub");
  Tape<S>& t = *a.tape;
  int ia = a.id, ib = b.id;
  return t.make(a.val() - b.val(), [ia, ib](Tape<S>& t, const Mat<S>& g) {
    t.accumulate(ia, g);
    t.accumulate(ib, -g);
  });
}

template <class S>
Expr<S> cmul(Expr<S> a, Expr<S> b) {
  check_same_shape(a, b, "cmul");
  Tape<S>& t = *a.tape;
  int ia = a.id, ib = b.id;
  Mat<S> y = a.val().cwiseProduct(b.val());
  return t.make(std::move(y), [ia, ib](Tape<S>& t, const Mat<S>& g) {
    t.accumulate(ia, g.cwiseProduct(t.node(ib).val));
    t.accumulate(ib, g.cwiseProduct(t.node(ia).val));
  });
}

/// k1 * a + k2 with constant coefficients.
template <class S>
Expr<S> affine_const(Expr<S> a, double k1, double k2) {
  Tape<S>& t = *a.tape;
  int ia = a.id;
  Mat<S> y = (a.val().array() * static_cast<S>(k1) + static_cast<S>(k2)).matrix();
  return t.make(std::move(y), [ia, k1](Tape<S>& t, const Mat<S>& g) {
    t.accumulate(ia, (g.array() * static_cast<S>(k1)).matrix());
  });
}

template <class S>
Expr<S> scale(Expr<S> a, double k) {
  return affine_const(a, k, 0.0);
}

/// Broadcast multiply by a 1x1 expression.
template <class S>
Expr<S> scale_by(Expr<S> a, Expr<S> s) {
  if (s.rows() != 1 || s.cols() != 1)
    throw std::invalid_argument("scale_by needs 1x1 scale, got " +
                                detail::shape_str(s.val()));
  Tape<S>& t = *a.tape;
  int ia = a.id, is = s.id;
  Mat<S> y = a.val() * s.val()(0, 0);
  return t.make(std::move(y), [ia, is](Tape<S>& t, const Mat<S>& g) {
    t.accumulate(ia, g * t.node(is).val(0, 0));
    Mat<S> ds(1, 1);
    ds(0, 0) = g.cwiseProduct(t.node(ia).val).sum();
    t.accumulate(is, ds);
  });
}

// ---- elementwise nonlinearities ----

template <class S>
Expr<S> tanh_e(Expr<S> a) {
  Tape<S>& t = *a.tape;
  int ia = a.id;
  Mat<S> y = a.val().array().tanh().matrix();
  Expr<S> out = t.make(std::move(y), nullptr);
  int io = out.id;
  t.node(io).back = [ia, io](Tape<S>& t, const Mat<S>& g) {
    const Mat<S>& yv = t.node(io).val;
    t.accumulate(ia, (g.array() * (1 - yv.array().square())).matrix());
  };
  return out;
}

template <class S>
Expr<S> sigmoid_e(Expr<S> a) {
  Tape<S>& t = *a.tape;
  int ia = a.id;
  Mat<S> y = (1 / (1 + (-a.val().array()).exp())).matrix();
  Expr<S> out = t.make(std::move(y), nullptr);
  int io = out.id;
  t.node(io).back = [ia, io](Tape<S>& t, const Mat<S>& g) {
    const auto& yv = t.node(io).val.array();
    t.accumulate(ia, (g.array() * yv * (1 - yv)).matrix());
  };
  return out;
}

template <class S>
Expr<S> log_e(Expr<S> a) {
  Tape<S>& t = *a.tape;
  int ia = a.id;
  Mat<S> y = a.val().array().log().matrix();
  return t.make(std::move(y), [ia](Tape<S>& t, const Mat<S>& g) {
    t.accumulate(ia, (g.array() / t.node(ia).val.array()).matrix());
  });
}

// ---- softmax ----

/// Column-vector softmax over admissible entries; masked entries are exactly
/// zero. Throws if nothing is admissible.
template <class S>
Expr<S> softmax_masked(Expr<S> a, const std::vector<char>& admissible) {
  if (a.cols() != 1)
    throw std::invalid_argument("softmax_masked needs a column vector, got " +
                                detail::shape_str(a.val()));
  if (admissible.size() != static_cast<size_t>(a.rows()))
    throw std::invalid_argument("softmax mask size mismatch");
  Tape<S>& t = *a.tape;
  const Mat<S>& x = a.val();
  S mx = std::numeric_limits<S>::lowest();
  bool any = false;
  for (int i = 0; i < x.rows(); ++i)
    if (admissible[i]) {
      any = true;
      mx = std::max(mx, x(i, 0));
    }
  if (!any) throw std::runtime_error("no admissible action");
  Mat<S> y = Mat<S>::Zero(x.rows(), 1);
  S z = 0;
  for (int i = 0; i < x.rows(); ++i)
    if (admissible[i]) {
      y(i, 0) = std::exp(x(i, 0) - mx);
      z += y(i, 0);
    }
  y /= z;
  int ia = a.id;
  Expr<S> out = t.make(std::move(y), nullptr);
  int io = out.id;
  std::vector<char> adm = admissible;
  t.node(io).back = [ia, io, adm](Tape<S>& t, const Mat<S>& g) {
    const Mat<S>& yv = t.node(io).val;
    S dot = 0;
    for (int i = 0; i < yv.rows(); ++i)
      if (adm[i]) dot += g(i, 0) * yv(i, 0);
    Mat<S> dx = Mat<S>::Zero(yv.rows(), 1);
    for (int i = 0; i < yv.rows(); ++i)
      if (adm[i]) dx(i, 0) = yv(i, 0) * (g(i, 0) - dot);
    t.accumulate(ia, dx);
  };
  return out;
}

template <class S>
Expr<S> softmax_vec(Expr<S> a) {
  return softmax_masked(a, std::vector<char>(a.rows(), 1));
}

/// Row-wise softmax of a matrix.
template <class S>
Expr<S> softmax_rows(Expr<S> a) {
  Tape<S>& t = *a.tape;
  const Mat<S>& x = a.val();
  Mat<S> y(x.rows(), x.cols());
  for (int r = 0; r < x.rows(); ++r) {
    S mx = x.row(r).maxCoeff();
    Eigen::Array<S, 1, Eigen::Dynamic> e = (x.row(r).array() - mx).exp();
    y.row(r) = (e / e.sum()).matrix();
  }
  int ia = a.id;
  Expr<S> out = t.make(std::move(y), nullptr);
  int io = out.id;
  t.node(io).back = [ia, io](Tape<S>& t, const Mat<S>& g) {
    const Mat<S>& yv = t.node(io).val;
    Mat<S> dx(yv.rows(), yv.cols());
    for (int r = 0; r < yv.rows(); ++r) {
      S dot = g.row(r).dot(yv.row(r));
      dx.row(r) = (yv.row(r).array() * (g.row(r).array() - dot)).matrix();
    }
    t.accumulate(ia, dx);
  };
  return out;
}

// ---- structure ops ----

/// Stack column vectors as rows: n items of [d,1] -> [n,d].
template <class S>
Expr<S> stack_rows(Tape<S>& t, const std::vector<Expr<S>>& items) {
  if (items.empty()) throw std::invalid_argument("stack_rows of nothing");
  int d = items[0].rows();
  Mat<S> y(static_cast<int>(items.size()), d);
  std::vector<int> ids;
  for (size_t i = 0; i < items.size(); ++i) {
    if (items[i].cols() != 1 || items[i].rows() != d)
      throw std::invalid_argument("stack_rows item shape mismatch: " +
                                  detail::shape_str(items[i].val()));
    y.row(static_cast<int>(i)) = items[i].val().transpose();
    ids.push_back(items[i].id);
  }
  return t.make(std::move(y), [ids](Tape<S>& t, const Mat<S>& g) {
    for (size_t i = 0; i < ids.size(); ++i)
      t.accumulate(ids[i], g.row(static_cast<int>(i)).transpose());
  });
}

/// Row i as a column vector.
template <class S>
Expr<S> pick_row(Expr<S> a, int i) {
  if (i < 0 || i >= a.rows())
    throw std::invalid_argument("pick_row index " + std::to_string(i) +
                                " out of range for " +
                                detail::shape_str(a.val()));
  Tape<S>& t = *a.tape;
  int ia = a.id;
  Mat<S> y = a.val().row(i).transpose();
  return t.make(std::move(y), [ia, i](Tape<S>& t, const Mat<S>& g) {
    t.node(ia).grad.row(i) += g.transpose();
  });
}

template <class S>
Expr<S> top_rows(Expr<S> a, int k) {
  if (k < 0 || k > a.rows())
    throw std::invalid_argument("top_rows count out of range");
  Tape<S>& t = *a.tape;
  int ia = a.id;
  Mat<S> y = a.val().topRows(k);
  return t.make(std::move(y), [ia, k](Tape<S>& t, const Mat<S>& g) {
    t.node(ia).grad.topRows(k) += g;
  });
}

/// Vertical concatenation of column vectors.
template <class S>
Expr<S> vcat(Expr<S> a, Expr<S> b) {
  if (a.cols() != 1 || b.cols() != 1)
    throw std::invalid_argument("vcat needs column vectors");
  Tape<S>& t = *a.tape;
  Mat<S> y(a.rows() + b.rows(), 1);
  y.topRows(a.rows()) = a.val();
  y.bottomRows(b.rows()) = b.val();
  int ia = a.id, ib = b.id, na = a.rows(), nb = b.rows();
  return t.make(std::move(y), [ia, ib, na, nb](Tape<S>& t, const Mat<S>& g) {
    t.accumulate(ia, g.topRows(na));
    t.accumulate(ib, g.bottomRows(nb));
  });
}

template <class S>
Expr<S> segment_rows(Expr<S> a, int off, int len) {
  if (a.cols() != 1 || off < 0 || len < 0 || off + len > a.rows())
    throw std::invalid_argument("segment_rows out of range");
  Tape<S>& t = *a.tape;
  int ia = a.id;
  Mat<S> y = a.val().middleRows(off, len);
  return t.make(std::move(y), [ia, off, len](Tape<S>& t, const Mat<S>& g) {
    t.node(ia).grad.middleRows(off, len) += g;
  });
}

/// Scalar element of a column vector.
template <class S>
Expr<S> pick(Expr<S> a, int i) {
  if (a.cols() != 1 || i < 0 || i >= a.rows())
    throw std::invalid_argument("pick index out of range");
  Tape<S>& t = *a.tape;
  int ia = a.id;
  Mat<S> y(1, 1);
  y(0, 0) = a.val()(i, 0);
  return t.make(std::move(y), [ia, i](Tape<S>& t, const Mat<S>& g) {
    t.node(ia).grad(i, 0) += g(0, 0);
  });
}

template <class S>
Expr<S> sum_e(Expr<S> a) {
  Tape<S>& t = *a.tape;
  int ia = a.id;
  Mat<S> y(1, 1);
  y(0, 0) = a.val().sum();
  return t.make(std::move(y), [ia](Tape<S>& t, const Mat<S>& g) {
    t.node(ia).grad.array() += g(0, 0);
  });
}

template <class S>
Expr<S> mean_e(Expr<S> a) {
  Tape<S>& t = *a.tape;
  int ia = a.id;
  double inv = 1.0 / static_cast<double>(a.val().size());
  Mat<S> y(1, 1);
  y(0, 0) = a.val().sum() * static_cast<S>(inv);
  return t.make(std::move(y), [ia, inv](Tape<S>& t, const Mat<S>& g) {
    t.node(ia).grad.array() += g(0, 0) * static_cast<S>(inv);
  });
}

template <class S>
Expr<S> transpose_e(Expr<S> a) {
  Tape<S>& t = *a.tape;
  int ia = a.id;
  Mat<S> y = a.val().transpose();
  return t.make(std::move(y), [ia](Tape<S>& t, const Mat<S>& g) {
    t.accumulate(ia, g.transpose());
  });
}

/// Add a column vector b to every row of A (bias broadcast).
template <class S>
Expr<S> add_rowwise(Expr<S> a, Expr<S> b) {
  if (b.cols() != 1 || b.rows() != a.cols())
    throw std::invalid_argument("add_rowwise shape mismatch: " +
                                detail::shape_str(a.val()) + " vs " +
                                detail::shape_str(b.val()));
  Tape<S>& t = *a.tape;
  Mat<S> y = a.val().rowwise() + b.val().col(0).transpose();
  int ia = a.id, ib = b.id;
  return t.make(std::move(y), [ia, ib](Tape<S>& t, const Mat<S>& g) {
    t.accumulate(ia, g);
    t.accumulate(ib, g.colwise().sum().transpose());
  });
}

/// Gather rows by index (duplicates allowed).
template <class S>
Expr<S> gather_rows(Expr<S> a, const std::vector<int>& ids) {
  Tape<S>& t = *a.tape;
  Mat<S> y(static_cast<int>(ids.size()), a.cols());
  for (size_t j = 0; j < ids.size(); ++j) {
    if (ids[j] < 0 || ids[j] >= a.rows())
      throw std::invalid_argument("gather_rows index out of range");
    y.row(static_cast<int>(j)) = a.val().row(ids[j]);
  }
  int ia = a.id;
  std::vector<int> idx = ids;
  return t.make(std::move(y), [ia, idx](Tape<S>& t, const Mat<S>& g) {
    for (size_t j = 0; j < idx.size(); ++j)
      t.node(ia).grad.row(idx[j]) += g.row(static_cast<int>(j));
  });
}

/// Embedding lookup straight from a parameter table.
template <class S>
Expr<S> embedding_rows(Tape<S>& t, Parameter<S>& table,
                       const std::vector<int>& ids) {
  Mat<S> y(static_cast<int>(ids.size()), table.value.cols());
  for (size_t j = 0; j < ids.size(); ++j) {
    if (ids[j] < 0 || ids[j] >= table.value.rows())
      throw std::invalid_argument("embedding index out of range: " +
                                  std::to_string(ids[j]));
    y.row(static_cast<int>(j)) = table.value.row(ids[j]);
  }
  Parameter<S>* pp = &table;
  std::vector<int> idx = ids;
  return t.make(std::move(y), [pp, idx](Tape<S>&, const Mat<S>& g) {
    for (size_t j = 0; j < idx.size(); ++j)
      pp->grad.row(idx[j]) += g.row(static_cast<int>(j));
  });
}

/// out[ids[j]] += a[j]; `a` is a column vector, result has out_rows rows.
template <class S>
Expr<S> scatter_rows_sum(Expr<S> a, const std::vector<int>& ids, int out_rows) {
  if (a.cols() != 1 || static_cast<size_t>(a.rows()) != ids.size())
    throw std::invalid_argument("scatter_rows_sum shape mismatch");
  Tape<S>& t = *a.tape;
  Mat<S> y = Mat<S>::Zero(out_rows, 1);
  for (size_t j = 0; j < ids.size(); ++j) {
    if (ids[j] < 0 || ids[j] >= out_rows)
      throw std::invalid_argument("scatter index out of range");
    y(ids[j], 0) += a.val()(static_cast<int>(j), 0);
  }
  int ia = a.id;
  std::vector<int> idx = ids;
  return t.make(std::move(y), [ia, idx](Tape<S>& t, const Mat<S>& g) {
    for (size_t j = 0; j < idx.size(); ++j)
      t.node(ia).grad(static_cast<int>(j), 0) += g(idx[j], 0);
  });
}

/// Zero-pad a matrix with extra rows at the bottom.
template <class S>
Expr<S> pad_rows(Expr<S> a, int total_rows) {
  if (total_rows < a.rows())
    throw std::invalid_argument("pad_rows shrinks matrix");
  Tape<S>& t = *a.tape;
  Mat<S> y = Mat<S>::Zero(total_rows, a.cols());
  y.topRows(a.rows()) = a.val();
  int ia = a.id, na = a.rows();
  return t.make(std::move(y), [ia, na](Tape<S>& t, const Mat<S>& g) {
    t.accumulate(ia, g.topRows(na));
  });
}

// ---- recurrent cell ----

template <class S>
struct LstmOut {
  Expr<S> h;
  Expr<S> c;
};

/// Single LSTM step from primitive ops; gate layout is [input, forget,
/// output, candidate] so a forget bias sits in rows [H, 2H).
template <class S>
LstmOut<S> lstm_cell(Expr<S> x, Expr<S> h, Expr<S> c, Expr<S> wx, Expr<S> wh,
                     Expr<S> b) {
  int H = h.rows();
  Expr<S> gates = add(add(matmul(wx, x), matmul(wh, h)), b);
  if (gates.rows() != 4 * H)
    throw std::invalid_argument("lstm_cell gate rows != 4*hidden");
  Expr<S> i = sigmoid_e(segment_rows(gates, 0, H));
  Expr<S> f = sigmoid_e(segment_rows(gates, H, H));
  Expr<S> o = sigmoid_e(segment_rows(gates, 2 * H, H));
  Expr<S> g = tanh_e(segment_rows(gates, 3 * H, H));
  Expr<S> c_next = add(cmul(f, c), cmul(i, g));
  Expr<S> h_next = cmul(o, tanh_e(c_next));
  return {h_next, c_next};
}

}  // namespace summ::nn
