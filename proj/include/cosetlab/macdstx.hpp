#pragma once
// Reconstructed sum-rate bounds for the two-encoder MAC with states known
// non-causally at the transmitters (Ex. 5), and the cost-budget sweep
// behind the rate curves.
//
// Both bounds maximize over per-encoder test channels: a conditional law
// P(U_j | S_j) plus a deterministic input map x_j(u_j, s_j), subject to
// E[kappa_j(X)] <= tau. The iid bound is the independent binning sum rate
// [I(U1,U2;Y) - I(U1;S1) - I(U2;S2)]^+; the coset bound is the
// nested-coset accounting [min_j H(U_j|S_j) - H(U1 + U2 | Y)]^+ with the
// sum taken in F_q. Deterministic input maps are enumerated exhaustively;
// the laws are optimized by multi-start coordinate ascent.

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cosetlab/channel_models.hpp"

namespace cosetlab::macdstx {

struct Options {
  int restarts = 20;          // multi-start count per input map
  double coarse_step = 0.02;  // per-coordinate scan step
  double fine_step = 0.002;   // refinement step around the scan winner
  std::uint64_t seed = 0x5EEDC0DE;  // restart initialization
};

// The achieving test channel of a bound evaluation.
struct TestChannel {
  // u_laws[j][s * aux + u] = P(U_j = u | S_j = s)
  std::array<std::vector<double>, 2> u_laws;
  // x_maps[j][u * |S_j| + s] = x_j(u, s)
  std::array<std::vector<std::uint8_t>, 2> x_maps;
  std::size_t aux = 0;
};

struct BoundResult {
  double rate = 0.0;  // bits, already clamped at 0
  TestChannel best;
};

// Largest [I(U1,U2;Y) - I(U1;S1) - I(U2;S2)]^+ found; aux_size <= 4.
BoundResult iid_sum_rate_ub(const channels::ChannelModel& ch, double tau,
                            std::size_t aux_size, const Options& opt = {});

// Largest [min_j H(U_j|S_j) - H(U1 + U2 | Y)]^+ found, U_j over F_q,
// q in {2, 3}; the auxiliary alphabet is the field itself.
BoundResult coset_sum_rate_lb(const channels::ChannelModel& ch, double tau,
                              std::uint8_t q, const Options& opt = {});

struct SweepRow {
  double tau = 0.0;
  double iid_upper = 0.0;
  double coset_lower = 0.0;
};

// Uniform tau grid over [0, 0.5], both bounds per point, rows ascending.
// Defaults: iid aux_size 2, coset q = 2.
std::vector<SweepRow> sweep_tau(const channels::ChannelModel& ch,
                                std::size_t grid_size,
                                const Options& opt = {});

// header tau,iid_upper,coset_lower; 9 significant digits
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

// The noiseless binary adder (Y = X1 xor X2, states ignored) and the
// doubly-dirty adder (Y = X1 xor X2 xor S1 xor S2), both with uniform
// independent states and Hamming costs. Sanity anchors for the bounds.
channels::ChannelModel make_adder_channel();
channels::ChannelModel make_doubly_dirty_channel();

}  // namespace cosetlab::macdstx
