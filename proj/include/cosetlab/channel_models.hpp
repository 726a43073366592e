#pragma once
// The five example channels as finite transition tables, joint
// input-state-output distribution construction, and the text file format
// for user-supplied channels.
//
// Row ordering is lexicographic in (inputs..., states...) with the first
// variable most significant; within a row, outputs are lexicographic the
// same way. Channel files carry probabilities as decimal strings.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cosetlab/finite_math.hpp"

namespace cosetlab::channels {

struct ChannelModel {
  std::vector<std::size_t> input_dims;   // one per input terminal
  std::vector<std::size_t> state_dims;   // empty if stateless
  std::vector<std::size_t> output_dims;  // one per output terminal
  // rows[r][y]: P(outputs = y | inputs,states = r); rows sum to 1 (1e-9)
  std::vector<std::vector<double>> rows;
  // cost_fns[j]: cost table over the joint input alphabet (lexicographic)
  std::vector<std::vector<double>> cost_fns;
  std::vector<double> cost_budgets;  // one per cost function
  // joint pmf over the state tuple; present iff state_dims nonempty
  std::optional<Pmf> state_law;

  static constexpr double kRowTol = 1e-9;

  std::size_t input_cells() const;
  std::size_t state_cells() const;
  std::size_t output_cells() const;
  bool has_states() const { return !state_dims.empty(); }

  void validate() const;  // throws std::invalid_argument on any violation
};

// Ex. 1: three binary users, Rx 1 sees x1 xor (x2 or x3) through BSC_d1,
// users 2 and 3 get clean BSC legs.
ChannelModel make_ex1(Prob delta1, Prob delta2, Prob delta3);

// Ex. 2: the additive MAC leg of Ex. 1 replaced by a non-additive 2x2
// table MAC(y1 | x1, x2 or x3).
struct MacTable {
  // p0[x1][v] = MAC(Y1 = 0 | x1, v), v = x2 or x3
  std::array<std::array<double, 2>, 2> p0;
};
MacTable paper_mac_table();  // 0.989 / 0.01 / 0.02 / 0.993
ChannelModel make_ex2(const MacTable& mac, Prob delta);

// Ex. 3: Y_j = (X_j and N_j1) xor (X_i or X_k) xor N_j2 with
// P(N_j1 = 1) = beta, P(N_j2 = 1) = delta, all noises independent.
ChannelModel make_ex3(Prob beta, Prob delta);

// Ex. 4: the broadcast version of Ex. 1 -- same W table, one 8-ary input
// terminal, and three per-digit Hamming cost functions.
ChannelModel make_ex4(Prob delta1, Prob delta);

// Ex. 5: the two-encoder MAC with distributed states; 16 transition rows,
// uniform independent states, per-encoder Hamming costs.
ChannelModel make_ex5();

// Joint pmf over (inputs..., states..., outputs...) from independent
// per-terminal input laws. state_law overrides the model's own when given
// and is required if the channel has states but carries no law.
JointPmf joint_distribution(const ChannelModel& ch,
                            const std::vector<Pmf>& input_laws,
                            const std::optional<Pmf>& state_law = {});

// Channel file I/O. Schema: a JSON document with keys input_dims,
// state_dims, output_dims, rows, cost_fns, cost_budgets, state_law, where
// every probability and cost is a decimal string. dump followed by load
// reproduces the model exactly.
ChannelModel load_channel(const std::string& path);
void dump_channel(const ChannelModel& ch, const std::string& path);
std::string channel_to_text(const ChannelModel& ch);
ChannelModel channel_from_text(const std::string& text);

}  // namespace cosetlab::channels
