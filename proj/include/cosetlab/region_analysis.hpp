#pragma once
// The printed proposition conditions for the 3-to-1 interference channel
// (and their broadcast twins), the C1 optimization for the non-additive
// MAC coupling, coset sum-decodability margins over the ternary
// embedding, and the 3-user-IC simultaneity check.

#include <array>
#include <cstddef>

#include "cosetlab/channel_models.hpp"
#include "cosetlab/finite_math.hpp"
#include "cosetlab/report.hpp"

namespace cosetlab::region {

// Parameter point (tau1, tau, delta1, delta); every proposition requires
// all four inside the open interval (0, 1/2).
struct IcParams {
  double tau1 = 1.0 / 90.0;
  double tau = 0.15;
  double delta1 = 0.01;
  double delta = 0.067;

  void validate() const;  // std::domain_error outside (0, 0.5)
};

// beta = delta1 * (2 tau - tau^2)  (binary convolution)
double beta_of(const IcParams& p);

// Ex. 1 iid infeasibility: lhs = dh(tau1,delta1) + 2 dh(tau,delta),
// rhs = h_b(tau1 * beta) - h_b(delta1); margin = lhs - rhs; the verdict
// (lhs > rhs + strictness) means the PTP-capacity triple is unreachable
// with iid codes.
PropositionReport check_prop1(const IcParams& p, double strictness = 0.0);

// theta = h_b(tau) - h_b((1-tau)^2) - (2tau - tau^2) h_b(tau^2/(2tau-tau^2))
//         - h_b(tau1 * delta1) + h_b(tau1 * beta).
// tau = 0 is allowed (every term vanishes under the 0*h_b(0/0) := 0
// convention); the proposition checks themselves stay on (0, 0.5).
double compute_theta(const IcParams& p);

// Ex. 1 coset achievability: verdict = (dh(tau,delta) <= theta),
// margin = theta - dh(tau,delta).
PropositionReport check_prop2(const IcParams& p);

// Broadcast twins; same computations, reports differ only in name.
PropositionReport check_prop4(const IcParams& p, double strictness = 0.0);
PropositionReport check_prop5(const IcParams& p);

struct C1Result {
  double c1 = 0.0;           // sup I(X1;Y1 | X2 v X3), bits
  double p_star_x1_1 = 0.0;  // optimal P(X1 = 1), always <= tau1
  int iterations = 0;        // objective evaluations spent
  double optimizer_tolerance = 0.0;  // final bracket width in p
};

// Maximize I(X1;Y1 | X2 v X3) over P(X1=1) in [0, tau1] with users 2 and 3
// fixed at Bernoulli(tau), on a 3-binary-input channel (Ex. 2 family).
// Coarse 1e-3 grid followed by golden-section refinement to 1e-7; ties
// break toward smaller p. Throws std::runtime_error if the refinement
// fails to converge within its iteration cap.
C1Result compute_c1(const channels::ChannelModel& ch, double tau1, double tau);

struct Prop3Report {
  PropositionReport iid_infeasible;    // G_A > 0
  PropositionReport coset_achievable;  // G_B <= 0
  C1Result c1;
};

// Prop 3 on the Ex. 2 channel: evaluates both displayed conditions at the
// C1-achieving input law. G_A = C1 + 2 dh(tau,delta) - I(X;Y1);
// G_B = h_b(tau^2) + (1-tau^2) h_b((1-tau)^2/(1-tau^2)) + H(Y1|X2 v X3)
//       - H(Y1) - min{H(X2|Y2), H(X3|Y3)}.
Prop3Report check_prop3(const channels::ChannelModel& ch, double tau1,
                        double tau, double delta);

// Per-user sum-decodability bound min_j H(U_j) - H(U_a + U_b mod 3 | Y)
// on a joint whose axes u_axis_a/u_axis_b are ternary embeddings of
// binary variables (P(symbol 2) must be 0; violations throw).
double coset_sum_margin(const JointPmf& joint, std::size_t u_axis_a,
                        std::size_t u_axis_b, std::size_t y_axis);

struct ReceiverCheck {
  std::size_t receiver = 0;  // 0-based user index j
  double rate_i = 0.0;       // PTP rate of the first interferer
  double rate_k = 0.0;       // PTP rate of the second interferer
  double bound = 0.0;        // h_b(tau) - H(U_i + U_k | Y_j)
  double margin = 0.0;       // bound - max(rate_i, rate_k)
  bool pass = false;
};

struct Ex3Report {
  std::array<ReceiverCheck, 3> receivers;
  bool all_pass = false;
};

// Ex. 3 simultaneity: each receiver j must be able to sum-decode the other
// two users' cloud centers at their PTP rates. This implements the
// technique narrative (per-receiver sum bound + own-message PTP targets),
// not the companion theorem's full constraint family. tau = 0 is accepted
// and passes vacuously.
Ex3Report check_ex3_simultaneity(double beta, double delta, double tau);

}  // namespace cosetlab::region
