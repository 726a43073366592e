#pragma once
// Scalar entropy primitives (binary entropy, binary convolution, BSC
// capacity under a Hamming cost), generic entropy/mutual-information
// algebra over finite joint distributions, and prime-field arithmetic.
//
// All information quantities are in bits. 0*log2(0) := 0 throughout.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace cosetlab {

// A probability value, validated to [0,1] on construction.
class Prob {
 public:
  Prob() = default;
  explicit Prob(double v);  // throws std::domain_error outside [0,1]
  operator double() const { return v_; }
  double value() const { return v_; }

 private:
  double v_ = 0.0;
};

// h_b(x) = -x log2 x - (1-x) log2(1-x)
double binary_entropy(Prob x);

// a*b = a(1-b) + (1-a)b
Prob bconv(Prob a, Prob b);

// Capacity of a BSC with crossover delta under Hamming cost tau:
// h_b(tau*delta) - h_b(delta)
double bsc_capacity_cost(Prob tau, Prob delta);

// ------------------------------------------------------------------------
// Finite distributions

// Probability vector over a finite alphabet. Entries must be nonnegative
// and sum to 1 within kPmfTol; construction never renormalizes silently.
class Pmf {
 public:
  static constexpr double kPmfTol = 1e-12;

  explicit Pmf(std::vector<double> probs);
  static Pmf point_mass(std::size_t alphabet, std::size_t at);
  static Pmf uniform(std::size_t alphabet);
  static Pmf bernoulli(Prob p_one);  // {1-p, p}

  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  std::span<const double> probs() const { return p_; }

  // Explicit renormalization (divides by the current sum).
  Pmf normalized() const;

 private:
  struct Unchecked {};
  Pmf(std::vector<double> probs, Unchecked) : p_(std::move(probs)) {}
  std::vector<double> p_;
};

// Shannon entropy of a pmf, in bits.
double entropy(const Pmf& p);

using AxisList = std::vector<std::size_t>;

// Joint pmf over a tuple of finite alphabets, stored as a flat table in
// row-major (lexicographic) order: the first axis varies slowest.
class JointPmf {
 public:
  static constexpr double kPmfTol = 1e-12;

  JointPmf(std::vector<std::size_t> dims, std::vector<double> table);

  std::size_t rank() const { return dims_.size(); }
  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t dim(std::size_t axis) const { return dims_[axis]; }
  std::span<const double> table() const { return t_; }
  std::size_t table_size() const { return t_.size(); }

  // Entropy of the whole tuple, in bits.
  double entropy() const;

  // Marginal over the listed axes; result axes follow the order given
  // (so this doubles as an axis permutation).
  JointPmf marginal(const AxisList& axes) const;

  // H(target | given), by direct summation of -p log2(p/p_given) over the
  // (target, given) marginal.
  double cond_entropy(const AxisList& target, const AxisList& given) const;

  // I(A;B) = H(A) + H(B) - H(A,B), clamped to >= 0.
  double mutual_info(const AxisList& a, const AxisList& b) const;

  // I(A;B|C) = H(A|C) + H(B|C) - H(A,B|C), clamped to >= 0.
  double cond_mutual_info(const AxisList& a, const AxisList& b,
                          const AxisList& c) const;

  // Replace the listed axes by a single derived axis of size new_dim,
  // computed by fn on the replaced axes' symbol tuple. The derived axis
  // is appended as the last axis of the result; remaining axes keep
  // their relative order.
  JointPmf map_axes(
      const AxisList& axes, std::size_t new_dim,
      const std::function<std::size_t(std::span<const std::size_t>)>& fn)
      const;

  // Enlarge one axis to new_dim; the added symbols carry probability 0.
  // Used for the ternary embedding of binary variables.
  JointPmf widen_axis(std::size_t axis, std::size_t new_dim) const;

 private:
  struct Unchecked {};
  JointPmf(std::vector<std::size_t> dims, std::vector<double> table,
           Unchecked);
  void check_axes(const AxisList& axes) const;

  std::vector<std::size_t> dims_;
  std::vector<double> t_;
  friend JointPmf tensor(const JointPmf&, const JointPmf&);
};

// Product joint of two independent tuples (axes of b appended after a's).
JointPmf tensor(const JointPmf& a, const JointPmf& b);

// ------------------------------------------------------------------------
// Prime-field arithmetic, q in {2, 3, 5, 7}

bool prime_field_supported(std::uint8_t q);

struct FieldElem {
  std::uint8_t q = 2;
  std::uint8_t v = 0;
  FieldElem() = default;
  FieldElem(std::uint8_t q_, std::uint8_t v_);  // validates
  friend bool operator==(const FieldElem&, const FieldElem&) = default;
};

FieldElem fq_add(FieldElem a, FieldElem b);
FieldElem fq_mul(FieldElem a, FieldElem b);
FieldElem fq_neg(FieldElem a);

// Raw helpers for hot paths; caller guarantees a, b < q.
inline std::uint8_t fq_add_raw(std::uint8_t a, std::uint8_t b,
                               std::uint8_t q) {
  const std::uint8_t s = static_cast<std::uint8_t>(a + b);
  return s >= q ? static_cast<std::uint8_t>(s - q) : s;
}
inline std::uint8_t fq_mul_raw(std::uint8_t a, std::uint8_t b,
                               std::uint8_t q) {
  return static_cast<std::uint8_t>((a * b) % q);
}

// ------------------------------------------------------------------------
// Text <-> number conversion. Values are carried in files and on the
// command line as decimal strings (or integer fractions "a/b") and
// converted to binary floating point exactly once.

double parse_decimal(const std::string& text);      // accepts "0.15", "1/90"
double parse_probability(const std::string& text);  // + range check [0,1]
std::string format_decimal(double v);  // shortest round-trip decimal

}  // namespace cosetlab
