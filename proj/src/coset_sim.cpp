#include "cosetlab/coset_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "cosetlab/kernels.hpp"
#include "cosetlab/parallel.hpp"
#include "cosetlab/rng.hpp"

namespace cosetlab::sim {

namespace {

constexpr std::size_t kEnumGuard = std::size_t{1} << 20;
constexpr std::size_t kDecodeGuard = std::size_t{1} << 16;

// q^k with overflow saturation
std::size_t pow_size(std::uint8_t q, std::size_t k) {
  std::size_t v = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (v > (static_cast<std::size_t>(-1) / q)) return static_cast<std::size_t>(-1);
    v *= q;
  }
  return v;
}

// fixed stream ids for codebook construction; trials start at 16
constexpr std::uint64_t kStreamGen = 0;
constexpr std::uint64_t kStreamShift2 = 1;
constexpr std::uint64_t kStreamShift3 = 2;
constexpr std::uint64_t kStreamTrialBase = 16;

std::vector<std::uint8_t> sample_word(std::size_t n, std::uint8_t q,
                                      CounterRng& rng) {
  std::vector<std::uint8_t> w(n);
  for (auto& s : w) s = static_cast<std::uint8_t>(rng.next_below(q));
  return w;
}

// word = msg * G + shift, msg given as base-q digits (length k)
void encode_into(const LinearCode& code, const std::uint8_t* msg,
                 const std::uint8_t* shift, std::uint8_t* out) {
  const std::size_t n = code.n;
  for (std::size_t j = 0; j < n; ++j) out[j] = shift ? shift[j] : 0;
  for (std::size_t r = 0; r < code.k; ++r) {
    const std::uint8_t m = msg[r];
    if (m == 0) continue;
    const std::uint8_t* row = code.gen.data() + r * n;
    for (std::size_t j = 0; j < n; ++j) {
      const std::uint8_t prod = fq_mul_raw(m, row[j], code.q);
      out[j] = fq_add_raw(out[j], prod, code.q);
    }
  }
}

bool odometer_next(std::uint8_t* digits, std::size_t len, std::uint8_t base) {
  for (std::size_t i = len; i-- > 0;) {
    if (++digits[i] < base) return true;
    digits[i] = 0;
  }
  return false;
}

std::size_t count_distinct_sums(const CosetCodebook& a,
                                const CosetCodebook& b) {
  const auto wa = enumerate_coset(a);
  const auto wb = enumerate_coset(b);
  const std::uint8_t q = a.code.q;
  const std::size_t n = a.code.n;
  std::vector<std::vector<std::uint8_t>> sums;
  sums.reserve(wa.size() * wb.size());
  std::vector<std::uint8_t> s(n);
  for (const auto& u : wa)
    for (const auto& v : wb) {
      for (std::size_t j = 0; j < n; ++j) s[j] = fq_add_raw(u[j], v[j], q);
      sums.push_back(s);
    }
  std::sort(sums.begin(), sums.end());
  sums.erase(std::unique(sums.begin(), sums.end()), sums.end());
  return sums.size();
}

}  // namespace

LinearCode sample_code(std::size_t n, std::size_t k, std::uint8_t q,
                       std::uint64_t seed) {
  if (!prime_field_supported(q))
    throw std::invalid_argument("unsupported field size " + std::to_string(q));
  if (n == 0 || k > n)
    throw std::invalid_argument("sample_code: need 0 < n and k <= n");
  LinearCode code;
  code.n = n;
  code.k = k;
  code.q = q;
  code.gen.resize(k * n);
  CounterRng rng(seed, kStreamGen);
  for (auto& g : code.gen) g = static_cast<std::uint8_t>(rng.next_below(q));
  return code;
}

std::size_t rank_fq(const LinearCode& code) {
  const std::uint8_t q = code.q;
  std::vector<std::uint8_t> m = code.gen;
  const std::size_t rows = code.k, cols = code.n;
  // inverse table for the small prime field
  std::uint8_t inv[8] = {0};
  for (std::uint8_t a = 1; a < q; ++a)
    for (std::uint8_t b = 1; b < q; ++b)
      if (fq_mul_raw(a, b, q) == 1) inv[a] = b;

  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && m[pivot * cols + c] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap_ranges(m.begin() + static_cast<std::ptrdiff_t>(rank * cols),
                     m.begin() + static_cast<std::ptrdiff_t>((rank + 1) * cols),
                     m.begin() + static_cast<std::ptrdiff_t>(pivot * cols));
    const std::uint8_t scale = inv[m[rank * cols + c]];
    for (std::size_t j = c; j < cols; ++j)
      m[rank * cols + j] = fq_mul_raw(m[rank * cols + j], scale, q);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || m[r * cols + c] == 0) continue;
      const std::uint8_t f = m[r * cols + c];
      for (std::size_t j = c; j < cols; ++j) {
        const std::uint8_t sub = fq_mul_raw(f, m[rank * cols + j], q);
        m[r * cols + j] = fq_add_raw(
            m[r * cols + j], static_cast<std::uint8_t>(sub ? q - sub : 0), q);
      }
    }
    ++rank;
  }
  return rank;
}

std::vector<std::vector<std::uint8_t>> enumerate_coset(
    const CosetCodebook& cb) {
  if (cb.shift.size() != cb.code.n)
    throw std::invalid_argument("coset shift length does not match n");
  for (std::uint8_t s : cb.shift)
    if (s >= cb.code.q)
      throw std::invalid_argument("coset shift entry outside the field");
  const std::size_t count = pow_size(cb.code.q, cb.code.k);
  if (count > kEnumGuard)
    throw std::invalid_argument("enumerate_coset: q^k exceeds the 2^20 guard");
  std::vector<std::vector<std::uint8_t>> words;
  words.reserve(count);
  std::vector<std::uint8_t> msg(cb.code.k, 0);
  std::vector<std::uint8_t> w(cb.code.n);
  for (std::size_t i = 0; i < count; ++i) {
    encode_into(cb.code, msg.data(), cb.shift.data(), w.data());
    words.push_back(w);
    odometer_next(msg.data(), msg.size(), cb.code.q);
  }
  return words;
}

std::size_t sum_support_count(const CosetCodebook& a, const CosetCodebook& b) {
  if (!(a.code == b.code))
    throw std::invalid_argument(
        "sum_support_count: codebooks must share one linear code");
  const std::size_t words = pow_size(a.code.q, a.code.k);
  if (words == static_cast<std::size_t>(-1) || words * words > kEnumGuard)
    throw std::invalid_argument(
        "sum_support_count: q^(2k) exceeds the 2^20 guard");
  return count_distinct_sums(a, b);
}

std::size_t pairwise_sum_support_count(const CosetCodebook& a,
                                       const CosetCodebook& b) {
  if (a.code.n != b.code.n || a.code.q != b.code.q)
    throw std::invalid_argument(
        "pairwise_sum_support_count: codes must agree on n and q");
  const std::size_t wa = pow_size(a.code.q, a.code.k);
  const std::size_t wb = pow_size(b.code.q, b.code.k);
  if (wa == static_cast<std::size_t>(-1) || wb == static_cast<std::size_t>(-1) ||
      wa > kEnumGuard / wb)
    throw std::invalid_argument(
        "pairwise_sum_support_count: pair count exceeds the 2^20 guard");
  return count_distinct_sums(a, b);
}

// ---------------------------------------------------------------------------

std::string SimReport::to_text() const {
  nlohmann::ordered_json j;
  j["name"] = "ex1_sum_decode";
  j["n"] = n;
  j["k"] = k;
  j["q"] = q;
  j["cover_dims"] = cover_dims;
  j["trials"] = trials;
  j["rate"] = format_decimal(rate);
  j["decode_error_rate"] = format_decimal(decode_error_rate);
  j["seed"] = seed;
  return j.dump(2) + "\n";
}

SimReport simulate_ex1_sum_decode(const SimParams& params) {
  if (params.q < 3 || !prime_field_supported(params.q))
    throw std::invalid_argument(
        "simulate_ex1_sum_decode: q must be an odd supported prime (the OR "
        "interference is a function of the sum only for q >= 3)");
  if (params.k == 0 || params.n == 0)
    throw std::invalid_argument("simulate_ex1_sum_decode: need n, k >= 1");
  if (params.trials == 0)
    throw std::invalid_argument("simulate_ex1_sum_decode: need trials >= 1");
  const std::size_t nwords = pow_size(params.q, params.k);
  if (nwords > kDecodeGuard)
    throw std::invalid_argument(
        "simulate_ex1_sum_decode: q^k exceeds the 2^16 ML guard");
  if (!(params.delta1 >= 0.0 && params.delta1 < 0.5) ||
      !(params.tau1 >= 0.0 && params.tau1 < 0.5) ||
      !(params.tau >= 0.0 && params.tau < 0.5))
    throw std::domain_error(
        "simulate_ex1_sum_decode: delta1, tau1, tau must lie in [0, 0.5)");
  const std::size_t cover =
      params.cover_dims == SimParams::npos ? params.k / 2 : params.cover_dims;
  if (cover > params.k)
    throw std::invalid_argument("simulate_ex1_sum_decode: cover_dims > k");

  const std::size_t n = params.n, k = params.k;
  const std::uint8_t q = params.q;
  const LinearCode code = sample_code(n, k, q, params.seed);
  CounterRng shift2_rng(params.seed, kStreamShift2);
  CounterRng shift3_rng(params.seed, kStreamShift3);
  const CosetCodebook cb2{code, sample_word(n, q, shift2_rng)};
  const CosetCodebook cb3{code, sample_word(n, q, shift3_rng)};

  // The sum of any two codebook words lives in the single coset
  // C + shift2 + shift3; precompute it once, plus the interference bit
  // pattern or_bit(word) = 1{symbol != 0}, column-major for the decoder.
  std::vector<std::uint8_t> sum_shift(n);
  for (std::size_t j = 0; j < n; ++j)
    sum_shift[j] = fq_add_raw(cb2.shift[j], cb3.shift[j], q);
  const auto sum_words = enumerate_coset(CosetCodebook{code, sum_shift});
  std::vector<std::uint8_t> or_cols(n * nwords);
  for (std::size_t c = 0; c < nwords; ++c)
    for (std::size_t j = 0; j < n; ++j)
      or_cols[j * nwords + c] = sum_words[c][j] != 0 ? 1 : 0;

  // effective crossover seen by the sum decoder: user 1's input folded
  // into the channel noise
  const double eps = bconv(Prob{params.tau1}, Prob{params.delta1});
  const double ll_match = std::log(std::max(1.0 - eps, 1e-300));
  const double ll_flip = std::log(std::max(eps, 1e-300));

  // composition target (1-tau, tau, 0, ...) for the covering selection
  std::vector<double> target(q, 0.0);
  target[0] = 1.0 - params.tau;
  target[1] = params.tau;

  const std::size_t msg_dims = k - cover;
  const std::size_t ncover = pow_size(q, cover);

  std::vector<std::uint8_t> errors(params.trials, 0);
  parallel_for(params.trials, [&](std::size_t t) {
    CounterRng rng(params.seed, kStreamTrialBase + t);

    // messages, then the shaped transmit word from each message's
    // sub-coset (composition-nearest covering)
    std::vector<std::uint8_t> info(k, 0);
    std::vector<std::uint8_t> word(n), best_word(n), true_sum(n, 0);
    std::vector<std::size_t> freq(q);
    for (const CosetCodebook* cb : {&cb2, &cb3}) {
      for (std::size_t i = 0; i < msg_dims; ++i)
        info[i] = static_cast<std::uint8_t>(rng.next_below(q));
      std::fill(info.begin() + static_cast<std::ptrdiff_t>(msg_dims),
                info.end(), 0);
      double best_dist = -1.0;
      for (std::size_t c = 0; c < ncover; ++c) {
        encode_into(code, info.data(), cb->shift.data(), word.data());
        std::fill(freq.begin(), freq.end(), 0);
        for (std::uint8_t sym : word) ++freq[sym];
        double dist = 0.0;
        for (std::uint8_t sym = 0; sym < q; ++sym)
          dist += std::abs(static_cast<double>(freq[sym]) /
                               static_cast<double>(n) -
                           target[sym]);
        if (best_dist < 0.0 || dist < best_dist) {
          best_dist = dist;
          best_word = word;
        }
        if (cover > 0)
          odometer_next(info.data() + msg_dims, cover, q);
      }
      for (std::size_t j = 0; j < n; ++j)
        true_sum[j] = fq_add_raw(true_sum[j], best_word[j], q);
    }

    // y = or_bit(sum) xor X1 xor N1
    std::vector<std::uint8_t> y(n);
    for (std::size_t j = 0; j < n; ++j) {
      const std::uint8_t orbit = true_sum[j] != 0 ? 1 : 0;
      const std::uint8_t x1 = rng.next_bernoulli(params.tau1) ? 1 : 0;
      const std::uint8_t noise = rng.next_bernoulli(params.delta1) ? 1 : 0;
      y[j] = orbit ^ x1 ^ noise;
    }

    // ML over the sum coset; first index wins ties
    std::vector<double> scores(nwords, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const double v_or0 = y[j] == 0 ? ll_match : ll_flip;
      const double v_or1 = y[j] == 1 ? ll_match : ll_flip;
      kernels::select3_add(scores, or_cols.data() + j * nwords, v_or0, v_or1,
                           v_or1);
    }
    std::size_t arg = 0;
    for (std::size_t c = 1; c < nwords; ++c)
      if (scores[c] > scores[arg]) arg = c;
    errors[t] = sum_words[arg] == true_sum ? 0 : 1;
  });

  SimReport rep;
  rep.n = n;
  rep.k = k;
  rep.q = q;
  rep.cover_dims = cover;
  rep.trials = params.trials;
  rep.rate = static_cast<double>(k) * std::log2(static_cast<double>(q)) /
             static_cast<double>(n);
  rep.decode_error_rate =
      static_cast<double>(std::accumulate(errors.begin(), errors.end(),
                                          std::size_t{0})) /
      static_cast<double>(params.trials);
  rep.seed = params.seed;
  return rep;
}

}  // namespace cosetlab::sim
