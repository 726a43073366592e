#pragma once
// Coset codes over prime fields: random generator matrices, coset
// enumeration, the exhaustive closure check behind sum decoding, and a
// small Monte Carlo demonstration of decoding the sum of two coset
// codewords over the Ex. 1 channel.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cosetlab/finite_math.hpp"

namespace cosetlab::sim {

struct LinearCode {
  std::size_t n = 0;         // blocklength
  std::size_t k = 0;         // dimension
  std::uint8_t q = 2;        // field size
  std::vector<std::uint8_t> gen;  // k x n generator, row-major

  friend bool operator==(const LinearCode&, const LinearCode&) = default;
};

struct CosetCodebook {
  LinearCode code;
  std::vector<std::uint8_t> shift;  // length n
};

// Uniform random generator matrix from the deterministic counter RNG;
// identical (n, k, q, seed) gives identical bits on every platform.
LinearCode sample_code(std::size_t n, std::size_t k, std::uint8_t q,
                       std::uint64_t seed);

std::size_t rank_fq(const LinearCode& code);

// All q^k words m*G + shift in message-odometer order (last message symbol
// fastest). Guard: q^k <= 2^20.
std::vector<std::vector<std::uint8_t>> enumerate_coset(
    const CosetCodebook& cb);

// Exhaustive count of distinct pairwise sums {u + v : u in a, v in b}.
// Requires both codebooks to share the same LinearCode; the count always
// equals q^rank(G). Guard: q^(2k) <= 2^20.
std::size_t sum_support_count(const CosetCodebook& a, const CosetCodebook& b);

// Same count without the shared-code requirement (codes must agree on
// n and q). Statistical contrast: independent codebooks give close to
// min(q^n, q^2k) distinct sums instead of q^k.
std::size_t pairwise_sum_support_count(const CosetCodebook& a,
                                       const CosetCodebook& b);

struct SimParams {
  std::size_t n = 12;
  std::size_t k = 2;
  std::uint8_t q = 3;      // >= 3: the OR interference is read off the sum
  double delta1 = 0.01;    // BSC noise at Rx 1
  double tau1 = 1.0 / 90;  // user 1's Hamming budget (treated as noise)
  double tau = 0.15;       // users 2,3's target composition weight
  std::size_t trials = 2000;
  std::uint64_t seed = 1;
  // Trailing generator rows used for shaping: each message indexes a
  // sub-coset of q^cover_dims words and the encoder transmits the word
  // whose composition is L1-closest to (1-tau, tau, 0, ...). Defaults to
  // k/2 when left as npos.
  std::size_t cover_dims = npos;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

struct SimReport {
  std::size_t n = 0, k = 0, trials = 0;
  std::uint8_t q = 3;
  std::size_t cover_dims = 0;
  double rate = 0.0;  // k log2(q) / n, bits per symbol
  double decode_error_rate = 0.0;
  std::uint64_t seed = 0;

  std::string to_text() const;  // structured JSON, same layout family as
                                // PropositionReport
};

// Users 2 and 3 draw uniform messages, transmit shaped words from cosets
// of a common code, and Rx 1 maximum-likelihood decodes the sum codeword
// from y = or_bit(sum) xor X1 xor noise, treating the Bernoulli(tau1)
// input of user 1 and the BSC noise as one effective crossover
// bconv(tau1, delta1). Error = decoded sum word differs from the true
// one. Guard: q^k <= 2^16.
SimReport simulate_ex1_sum_decode(const SimParams& params);

}  // namespace cosetlab::sim
