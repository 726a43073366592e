#include "cosetlab/finite_math.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

#include "cosetlab/kernels.hpp"

namespace cosetlab {

Prob::Prob(double v) : v_(v) {
  if (!(v >= 0.0 && v <= 1.0))
    throw std::domain_error("probability outside [0,1]: " +
                            std::to_string(v));
}

double binary_entropy(Prob x) {
  const double p = x.value();
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

Prob bconv(Prob a, Prob b) {
  return Prob{a.value() * (1.0 - b.value()) + (1.0 - a.value()) * b.value()};
}

double bsc_capacity_cost(Prob tau, Prob delta) {
  return binary_entropy(bconv(tau, delta)) - binary_entropy(delta);
}

// ------------------------------------------------------------------------

namespace {

void check_prob_vector(std::span<const double> p, double tol,
                       const char* what) {
  for (double v : p)
    if (!(v >= 0.0))
      throw std::invalid_argument(std::string(what) + ": negative entry");
  const double s = kernels::sum(p);
  if (std::abs(s - 1.0) > tol)
    throw std::invalid_argument(std::string(what) + ": entries sum to " +
                                std::to_string(s) + ", not 1");
}

}  // namespace

Pmf::Pmf(std::vector<double> probs) : p_(std::move(probs)) {
  if (p_.empty()) throw std::invalid_argument("Pmf: empty alphabet");
  check_prob_vector(p_, kPmfTol, "Pmf");
}

Pmf Pmf::point_mass(std::size_t alphabet, std::size_t at) {
  if (at >= alphabet) throw std::invalid_argument("Pmf: point mass out of range");
  std::vector<double> p(alphabet, 0.0);
  p[at] = 1.0;
  return Pmf{std::move(p), Unchecked{}};
}

Pmf Pmf::uniform(std::size_t alphabet) {
  if (alphabet == 0) throw std::invalid_argument("Pmf: empty alphabet");
  return Pmf{std::vector<double>(alphabet, 1.0 / static_cast<double>(alphabet)),
             Unchecked{}};
}

Pmf Pmf::bernoulli(Prob p_one) {
  return Pmf{{1.0 - p_one.value(), p_one.value()}, Unchecked{}};
}

Pmf Pmf::normalized() const {
  const double s = kernels::sum(p_);
  if (s <= 0.0) throw std::invalid_argument("Pmf: cannot normalize zero mass");
  std::vector<double> q(p_.size());
  kernels::scale(q, p_, 1.0 / s);
  return Pmf{std::move(q), Unchecked{}};
}

double entropy(const Pmf& p) { return kernels::neg_plogp_sum(p.probs()); }

// ------------------------------------------------------------------------

JointPmf::JointPmf(std::vector<std::size_t> dims, std::vector<double> table)
    : dims_(std::move(dims)), t_(std::move(table)) {
  if (dims_.empty()) throw std::invalid_argument("JointPmf: no axes");
  std::size_t prod = 1;
  for (std::size_t d : dims_) {
    if (d == 0) throw std::invalid_argument("JointPmf: zero-size axis");
    prod *= d;
  }
  if (prod != t_.size())
    throw std::invalid_argument("JointPmf: table size does not match dims");
  check_prob_vector(t_, kPmfTol, "JointPmf");
}

JointPmf::JointPmf(std::vector<std::size_t> dims, std::vector<double> table,
                   Unchecked)
    : dims_(std::move(dims)), t_(std::move(table)) {}

void JointPmf::check_axes(const AxisList& axes) const {
  for (std::size_t a : axes)
    if (a >= dims_.size())
      throw std::invalid_argument("JointPmf: axis out of range");
}

double JointPmf::entropy() const { return kernels::neg_plogp_sum(t_); }

namespace {

std::vector<std::size_t> strides_of(const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> s(dims.size());
  std::size_t acc = 1;
  for (std::size_t i = dims.size(); i-- > 0;) {
    s[i] = acc;
    acc *= dims[i];
  }
  return s;
}

void require_disjoint(std::initializer_list<const AxisList*> lists) {
  std::vector<std::size_t> all;
  for (const AxisList* l : lists) all.insert(all.end(), l->begin(), l->end());
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end())
    throw std::invalid_argument("JointPmf: axis sets must be disjoint");
}

AxisList concat(const AxisList& a, const AxisList& b) {
  AxisList r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

}  // namespace

JointPmf JointPmf::marginal(const AxisList& axes) const {
  check_axes(axes);
  require_disjoint({&axes});
  if (axes.empty()) throw std::invalid_argument("JointPmf: empty marginal");
  const auto strides = strides_of(dims_);
  std::vector<std::size_t> out_dims(axes.size());
  for (std::size_t i = 0; i < axes.size(); ++i) out_dims[i] = dims_[axes[i]];
  const auto out_strides = strides_of(out_dims);
  std::size_t out_size = 1;
  for (std::size_t d : out_dims) out_size *= d;

  // per-source-index contribution to the output flat index
  std::vector<double> out(out_size, 0.0);
  std::vector<std::size_t> idx(dims_.size(), 0);
  for (std::size_t flat = 0; flat < t_.size(); ++flat) {
    std::size_t o = 0;
    for (std::size_t i = 0; i < axes.size(); ++i)
      o += idx[axes[i]] * out_strides[i];
    out[o] += t_[flat];
    for (std::size_t ax = dims_.size(); ax-- > 0;) {
      if (++idx[ax] < dims_[ax]) break;
      idx[ax] = 0;
    }
  }
  return JointPmf{std::move(out_dims), std::move(out), Unchecked{}};
}

double JointPmf::cond_entropy(const AxisList& target,
                              const AxisList& given) const {
  check_axes(target);
  check_axes(given);
  require_disjoint({&target, &given});
  if (target.empty())
    throw std::invalid_argument("JointPmf: empty target axes");
  if (given.empty()) {
    return marginal(target).entropy();
  }
  // marginal ordered (given..., target...) so rows share a given-cell
  const JointPmf m = marginal(concat(given, target));
  std::size_t given_cells = 1;
  for (std::size_t i = 0; i < given.size(); ++i) given_cells *= m.dims_[i];
  const std::size_t row = m.t_.size() / given_cells;

  double h = 0.0;
  for (std::size_t g = 0; g < given_cells; ++g) {
    const double* p = m.t_.data() + g * row;
    const double pg = kernels::sum({p, row});
    if (pg <= 0.0) continue;
    for (std::size_t t = 0; t < row; ++t)
      if (p[t] > 0.0) h -= p[t] * std::log2(p[t] / pg);
  }
  return h;
}

double JointPmf::mutual_info(const AxisList& a, const AxisList& b) const {
  check_axes(a);
  check_axes(b);
  require_disjoint({&a, &b});
  const double i = marginal(a).entropy() + marginal(b).entropy() -
                   marginal(concat(a, b)).entropy();
  return std::max(0.0, i);
}

double JointPmf::cond_mutual_info(const AxisList& a, const AxisList& b,
                                  const AxisList& c) const {
  check_axes(a);
  check_axes(b);
  check_axes(c);
  require_disjoint({&a, &b, &c});
  if (c.empty()) return mutual_info(a, b);
  const double i =
      cond_entropy(a, c) + cond_entropy(b, c) - cond_entropy(concat(a, b), c);
  return std::max(0.0, i);
}

JointPmf JointPmf::map_axes(
    const AxisList& axes, std::size_t new_dim,
    const std::function<std::size_t(std::span<const std::size_t>)>& fn) const {
  check_axes(axes);
  require_disjoint({&axes});
  if (axes.empty() || new_dim == 0)
    throw std::invalid_argument("JointPmf: bad map_axes arguments");

  std::vector<bool> mapped(dims_.size(), false);
  for (std::size_t a : axes) mapped[a] = true;
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < dims_.size(); ++i)
    if (!mapped[i]) kept.push_back(i);

  std::vector<std::size_t> out_dims;
  for (std::size_t i : kept) out_dims.push_back(dims_[i]);
  out_dims.push_back(new_dim);
  const auto out_strides = strides_of(out_dims);
  std::size_t out_size = 1;
  for (std::size_t d : out_dims) out_size *= d;

  std::vector<double> out(out_size, 0.0);
  std::vector<std::size_t> idx(dims_.size(), 0);
  std::vector<std::size_t> sub(axes.size(), 0);
  for (std::size_t flat = 0; flat < t_.size(); ++flat) {
    for (std::size_t i = 0; i < axes.size(); ++i) sub[i] = idx[axes[i]];
    const std::size_t derived = fn(sub);
    if (derived >= new_dim)
      throw std::invalid_argument("JointPmf: map_axes fn out of range");
    std::size_t o = derived * out_strides[kept.size()];
    for (std::size_t i = 0; i < kept.size(); ++i)
      o += idx[kept[i]] * out_strides[i];
    out[o] += t_[flat];
    for (std::size_t ax = dims_.size(); ax-- > 0;) {
      if (++idx[ax] < dims_[ax]) break;
      idx[ax] = 0;
    }
  }
  return JointPmf{std::move(out_dims), std::move(out), Unchecked{}};
}

JointPmf JointPmf::widen_axis(std::size_t axis, std::size_t new_dim) const {
  if (axis >= dims_.size())
    throw std::invalid_argument("JointPmf: axis out of range");
  if (new_dim < dims_[axis])
    throw std::invalid_argument("JointPmf: widen_axis cannot shrink");
  if (new_dim == dims_[axis]) return *this;

  std::vector<std::size_t> out_dims = dims_;
  out_dims[axis] = new_dim;
  const auto in_strides = strides_of(dims_);
  const auto out_strides = strides_of(out_dims);
  std::size_t out_size = 1;
  for (std::size_t d : out_dims) out_size *= d;

  std::vector<double> out(out_size, 0.0);
  std::vector<std::size_t> idx(dims_.size(), 0);
  for (std::size_t flat = 0; flat < t_.size(); ++flat) {
    std::size_t o = 0;
    for (std::size_t i = 0; i < dims_.size(); ++i) o += idx[i] * out_strides[i];
    out[o] = t_[flat];
    for (std::size_t ax = dims_.size(); ax-- > 0;) {
      if (++idx[ax] < dims_[ax]) break;
      idx[ax] = 0;
    }
  }
  return JointPmf{std::move(out_dims), std::move(out), Unchecked{}};
}

JointPmf tensor(const JointPmf& a, const JointPmf& b) {
  std::vector<std::size_t> dims = a.dims_;
  dims.insert(dims.end(), b.dims_.begin(), b.dims_.end());
  std::vector<double> t(a.t_.size() * b.t_.size());
  for (std::size_t i = 0; i < a.t_.size(); ++i)
    kernels::scale({t.data() + i * b.t_.size(), b.t_.size()}, b.t_, a.t_[i]);
  return JointPmf{std::move(dims), std::move(t), JointPmf::Unchecked{}};
}

// ------------------------------------------------------------------------

bool prime_field_supported(std::uint8_t q) {
  return q == 2 || q == 3 || q == 5 || q == 7;
}

FieldElem::FieldElem(std::uint8_t q_, std::uint8_t v_) : q(q_), v(v_) {
  if (!prime_field_supported(q))
    throw std::invalid_argument("unsupported field size " + std::to_string(q));
  if (v >= q) throw std::invalid_argument("field element out of range");
}

namespace {
void require_same_field(FieldElem a, FieldElem b) {
  if (a.q != b.q) throw std::invalid_argument("field modulus mismatch");
}
}  // namespace

FieldElem fq_add(FieldElem a, FieldElem b) {
  require_same_field(a, b);
  return FieldElem{a.q, fq_add_raw(a.v, b.v, a.q)};
}

FieldElem fq_mul(FieldElem a, FieldElem b) {
  require_same_field(a, b);
  return FieldElem{a.q, fq_mul_raw(a.v, b.v, a.q)};
}

FieldElem fq_neg(FieldElem a) {
  return FieldElem{a.q,
                   static_cast<std::uint8_t>(a.v == 0 ? 0 : a.q - a.v)};
}

// ------------------------------------------------------------------------

double parse_decimal(const std::string& text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const std::string num = text.substr(0, slash);
    const std::string den = text.substr(slash + 1);
    long long n = 0, d = 0;
    auto rn = std::from_chars(num.data(), num.data() + num.size(), n);
    auto rd = std::from_chars(den.data(), den.data() + den.size(), d);
    if (rn.ec != std::errc{} || rd.ec != std::errc{} ||
        rn.ptr != num.data() + num.size() || rd.ptr != den.data() + den.size())
      throw std::invalid_argument("bad fraction: " + text);
    if (d == 0) throw std::invalid_argument("zero denominator: " + text);
    return static_cast<double>(n) / static_cast<double>(d);
  }
  double v = 0.0;
  auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc{} || r.ptr != text.data() + text.size())
    throw std::invalid_argument("bad decimal: " + text);
  return v;
}

double parse_probability(const std::string& text) {
  return Prob{parse_decimal(text)}.value();
}

std::string format_decimal(double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace cosetlab
