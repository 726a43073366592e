#include "cosetlab/channel_models.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "cosetlab/kernels.hpp"

namespace cosetlab::channels {

namespace {

std::size_t product(const std::vector<std::size_t>& dims) {
  std::size_t p = 1;
  for (std::size_t d : dims) p *= d;
  return p;
}

double bsc(double eta, std::size_t y, std::size_t x) {
  return y == x ? 1.0 - eta : eta;
}

// three binary users, Hamming cost on each user's own bit
void add_hamming_costs(ChannelModel& ch) {
  for (std::size_t j = 0; j < 3; ++j) {
    std::vector<double> k(8, 0.0);
    for (std::size_t x = 0; x < 8; ++x)
      k[x] = static_cast<double>((x >> (2 - j)) & 1u);
    ch.cost_fns.push_back(std::move(k));
    ch.cost_budgets.push_back(0.5);
  }
}

}  // namespace

std::size_t ChannelModel::input_cells() const { return product(input_dims); }
std::size_t ChannelModel::state_cells() const { return product(state_dims); }
std::size_t ChannelModel::output_cells() const { return product(output_dims); }

void ChannelModel::validate() const {
  if (input_dims.empty() || output_dims.empty())
    throw std::invalid_argument("channel: missing input or output dims");
  for (std::size_t d : input_dims)
    if (d < 2) throw std::invalid_argument("channel: input alphabet < 2");
  for (std::size_t d : output_dims)
    if (d < 2) throw std::invalid_argument("channel: output alphabet < 2");
  const std::size_t nrows = input_cells() * state_cells();
  if (rows.size() != nrows)
    throw std::invalid_argument("channel: expected " + std::to_string(nrows) +
                                " rows, got " + std::to_string(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != output_cells())
      throw std::invalid_argument("channel: row " + std::to_string(r) +
                                  " has wrong length");
    double s = 0.0;
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      if (!(rows[r][c] >= 0.0))
        throw std::invalid_argument("channel: negative probability at row " +
                                    std::to_string(r) + ", column " +
                                    std::to_string(c));
      s += rows[r][c];
    }
    if (std::abs(s - 1.0) > kRowTol)
      throw std::invalid_argument("channel: row " + std::to_string(r) +
                                  " sums to " + std::to_string(s));
  }
  if (cost_fns.size() != cost_budgets.size())
    throw std::invalid_argument("channel: cost_fns/cost_budgets length mismatch");
  for (const auto& k : cost_fns) {
    if (k.size() != input_cells())
      throw std::invalid_argument("channel: cost table has wrong length");
    for (double v : k)
      if (!(v >= 0.0))
        throw std::invalid_argument("channel: negative cost");
  }
  for (std::size_t j = 0; j < cost_budgets.size(); ++j) {
    double kmax = 0.0;
    for (double v : cost_fns[j]) kmax = std::max(kmax, v);
    if (!(cost_budgets[j] >= 0.0 && cost_budgets[j] <= kmax))
      throw std::invalid_argument("channel: budget " + std::to_string(j) +
                                  " outside [0, max cost]");
  }
  if (has_states()) {
    if (!state_law)
      throw std::invalid_argument("channel: states without a state law");
    if (state_law->size() != state_cells())
      throw std::invalid_argument("channel: state law has wrong length");
  } else if (state_law) {
    throw std::invalid_argument("channel: state law without states");
  }
}

// --------------------------------------------------------------------------

ChannelModel make_ex1(Prob delta1, Prob delta2, Prob delta3) {
  const double d1 = delta1, d2 = delta2, d3 = delta3;
  ChannelModel ch;
  ch.input_dims = {2, 2, 2};
  ch.output_dims = {2, 2, 2};
  ch.rows.resize(8, std::vector<double>(8));
  for (std::size_t x1 = 0; x1 < 2; ++x1)
    for (std::size_t x2 = 0; x2 < 2; ++x2)
      for (std::size_t x3 = 0; x3 < 2; ++x3) {
        const std::size_t r = x1 * 4 + x2 * 2 + x3;
        const std::size_t z = x1 ^ (x2 | x3);
        for (std::size_t y1 = 0; y1 < 2; ++y1)
          for (std::size_t y2 = 0; y2 < 2; ++y2)
            for (std::size_t y3 = 0; y3 < 2; ++y3)
              ch.rows[r][y1 * 4 + y2 * 2 + y3] =
                  bsc(d1, y1, z) * bsc(d2, y2, x2) * bsc(d3, y3, x3);
      }
  add_hamming_costs(ch);
  return ch;
}

MacTable paper_mac_table() {
  return MacTable{{{{0.989, 0.01}, {0.02, 0.993}}}};
}

ChannelModel make_ex2(const MacTable& mac, Prob delta) {
  const double d = delta;
  for (const auto& row : mac.p0)
    for (double v : row)
      if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument("MAC table entry outside [0,1]");
  ChannelModel ch;
  ch.input_dims = {2, 2, 2};
  ch.output_dims = {2, 2, 2};
  ch.rows.resize(8, std::vector<double>(8));
  for (std::size_t x1 = 0; x1 < 2; ++x1)
    for (std::size_t x2 = 0; x2 < 2; ++x2)
      for (std::size_t x3 = 0; x3 < 2; ++x3) {
        const std::size_t r = x1 * 4 + x2 * 2 + x3;
        const std::size_t v = x2 | x3;
        for (std::size_t y1 = 0; y1 < 2; ++y1) {
          const double m = y1 == 0 ? mac.p0[x1][v] : 1.0 - mac.p0[x1][v];
          for (std::size_t y2 = 0; y2 < 2; ++y2)
            for (std::size_t y3 = 0; y3 < 2; ++y3)
              ch.rows[r][y1 * 4 + y2 * 2 + y3] =
                  m * bsc(d, y2, x2) * bsc(d, y3, x3);
        }
      }
  add_hamming_costs(ch);
  return ch;
}

ChannelModel make_ex3(Prob beta, Prob delta) {
  const double b = beta, d = delta;
  ChannelModel ch;
  ch.input_dims = {2, 2, 2};
  ch.output_dims = {2, 2, 2};
  ch.rows.resize(8, std::vector<double>(8));
  for (std::size_t x1 = 0; x1 < 2; ++x1)
    for (std::size_t x2 = 0; x2 < 2; ++x2)
      for (std::size_t x3 = 0; x3 < 2; ++x3) {
        const std::size_t r = x1 * 4 + x2 * 2 + x3;
        const std::size_t x[3] = {x1, x2, x3};
        double p1[3];  // P(Y_j = 1 | inputs)
        for (std::size_t j = 0; j < 3; ++j) {
          const std::size_t i = (j + 1) % 3, k = (j + 2) % 3;
          const double own = x[j] ? b : 0.0;  // X_j and N_j1
          const double noisy = bconv(Prob{own}, Prob{d});
          const std::size_t s = x[i] | x[k];
          p1[j] = s ? 1.0 - noisy : noisy;
        }
        for (std::size_t y1 = 0; y1 < 2; ++y1)
          for (std::size_t y2 = 0; y2 < 2; ++y2)
            for (std::size_t y3 = 0; y3 < 2; ++y3) {
              const std::size_t y[3] = {y1, y2, y3};
              double p = 1.0;
              for (std::size_t j = 0; j < 3; ++j)
                p *= y[j] ? p1[j] : 1.0 - p1[j];
              ch.rows[r][y1 * 4 + y2 * 2 + y3] = p;
            }
      }
  add_hamming_costs(ch);
  return ch;
}

ChannelModel make_ex4(Prob delta1, Prob delta) {
  ChannelModel ic = make_ex1(delta1, delta, delta);
  ChannelModel ch;
  ch.input_dims = {8};  // one terminal of three pooled binary digits
  ch.output_dims = {2, 2, 2};
  ch.rows = ic.rows;
  ch.cost_fns = ic.cost_fns;  // kappa_j(x1x2x3) = 1{x_j = 1}
  ch.cost_budgets = ic.cost_budgets;
  return ch;
}

ChannelModel make_ex5() {
  ChannelModel ch;
  ch.input_dims = {2, 2};
  ch.state_dims = {2, 2};
  ch.output_dims = {2};
  // W(Y = 0 | x1 x2 s1 s2), rows lexicographic in (x1, x2, s1, s2)
  const double w0[16] = {0.92, 0.07, 0.06, 0.96, 0.10, 0.88, 0.95, 0.11,
                         0.08, 0.92, 0.94, 0.10, 0.92, 0.08, 0.06, 0.91};
  ch.rows.resize(16);
  for (std::size_t r = 0; r < 16; ++r) ch.rows[r] = {w0[r], 1.0 - w0[r]};
  // kappa_j(x1, x2) = x_j regardless of the state
  ch.cost_fns = {{0.0, 0.0, 1.0, 1.0}, {0.0, 1.0, 0.0, 1.0}};
  ch.cost_budgets = {0.5, 0.5};
  ch.state_law = Pmf::uniform(4);
  return ch;
}

// --------------------------------------------------------------------------

JointPmf joint_distribution(const ChannelModel& ch,
                            const std::vector<Pmf>& input_laws,
                            const std::optional<Pmf>& state_law) {
  if (input_laws.size() != ch.input_dims.size())
    throw std::invalid_argument("joint_distribution: need one input law per terminal");
  for (std::size_t j = 0; j < input_laws.size(); ++j)
    if (input_laws[j].size() != ch.input_dims[j])
      throw std::invalid_argument("joint_distribution: input law " +
                                  std::to_string(j) + " has wrong alphabet");
  const Pmf* slaw = nullptr;
  if (ch.has_states()) {
    slaw = state_law ? &*state_law : (ch.state_law ? &*ch.state_law : nullptr);
    if (!slaw)
      throw std::invalid_argument("joint_distribution: channel has states, "
                                  "no state law given");
    if (slaw->size() != ch.state_cells())
      throw std::invalid_argument("joint_distribution: state law has wrong alphabet");
  } else if (state_law) {
    throw std::invalid_argument("joint_distribution: state law for a stateless channel");
  }

  const std::size_t in_cells = ch.input_cells();
  const std::size_t st_cells = ch.state_cells();
  const std::size_t out_cells = ch.output_cells();

  std::vector<double> px(in_cells);
  {
    std::vector<std::size_t> idx(ch.input_dims.size(), 0);
    for (std::size_t c = 0; c < in_cells; ++c) {
      double p = 1.0;
      for (std::size_t j = 0; j < idx.size(); ++j) p *= input_laws[j][idx[j]];
      px[c] = p;
      for (std::size_t ax = idx.size(); ax-- > 0;) {
        if (++idx[ax] < ch.input_dims[ax]) break;
        idx[ax] = 0;
      }
    }
  }

  std::vector<double> table(in_cells * st_cells * out_cells);
  for (std::size_t x = 0; x < in_cells; ++x)
    for (std::size_t s = 0; s < st_cells; ++s) {
      const double w = px[x] * (slaw ? (*slaw)[s] : 1.0);
      const std::size_t row = x * st_cells + s;
      kernels::scale({table.data() + row * out_cells, out_cells},
                     {ch.rows[row].data(), out_cells}, w);
    }

  std::vector<std::size_t> dims = ch.input_dims;
  dims.insert(dims.end(), ch.state_dims.begin(), ch.state_dims.end());
  dims.insert(dims.end(), ch.output_dims.begin(), ch.output_dims.end());
  return JointPmf{std::move(dims), std::move(table)};
}

// --------------------------------------------------------------------------

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json dims_to_json(const std::vector<std::size_t>& dims) {
  ordered_json a = ordered_json::array();
  for (std::size_t d : dims) a.push_back(d);
  return a;
}

ordered_json probs_to_json(const std::vector<double>& v) {
  ordered_json a = ordered_json::array();
  for (double p : v) a.push_back(format_decimal(p));
  return a;
}

std::vector<std::size_t> dims_from_json(const ordered_json& a,
                                        const char* field) {
  if (!a.is_array())
    throw std::runtime_error(std::string("channel file: ") + field +
                             " must be an array");
  std::vector<std::size_t> dims;
  for (const auto& v : a) {
    if (!v.is_number_unsigned())
      throw std::runtime_error(std::string("channel file: ") + field +
                               " entries must be nonnegative integers");
    dims.push_back(v.get<std::size_t>());
  }
  return dims;
}

std::vector<double> probs_from_json(const ordered_json& a, const char* field,
                                    std::size_t row) {
  std::vector<double> out;
  if (!a.is_array())
    throw std::runtime_error(std::string("channel file: ") + field +
                             " row " + std::to_string(row) + " must be an array");
  for (std::size_t c = 0; c < a.size(); ++c) {
    const auto& v = a[c];
    if (!v.is_string())
      throw std::runtime_error(std::string("channel file: ") + field + " row " +
                               std::to_string(row) + ", column " +
                               std::to_string(c) + " must be a decimal string");
    try {
      out.push_back(parse_decimal(v.get<std::string>()));
    } catch (const std::exception& e) {
      throw std::runtime_error(std::string("channel file: ") + field + " row " +
                               std::to_string(row) + ", column " +
                               std::to_string(c) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace

std::string channel_to_text(const ChannelModel& ch) {
  ordered_json j;
  j["input_dims"] = dims_to_json(ch.input_dims);
  j["state_dims"] = dims_to_json(ch.state_dims);
  j["output_dims"] = dims_to_json(ch.output_dims);
  ordered_json rows = ordered_json::array();
  for (const auto& r : ch.rows) rows.push_back(probs_to_json(r));
  j["rows"] = rows;
  ordered_json costs = ordered_json::array();
  for (const auto& k : ch.cost_fns) costs.push_back(probs_to_json(k));
  j["cost_fns"] = costs;
  j["cost_budgets"] = probs_to_json(ch.cost_budgets);
  if (ch.state_law) {
    const auto sp = ch.state_law->probs();
    j["state_law"] = probs_to_json(std::vector<double>(sp.begin(), sp.end()));
  } else {
    j["state_law"] = ordered_json::array();
  }
  return j.dump(2) + "\n";
}

ChannelModel channel_from_text(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("channel file: parse error: ") +
                             e.what());
  }
  for (const char* key : {"input_dims", "state_dims", "output_dims", "rows",
                          "cost_fns", "cost_budgets", "state_law"})
    if (!j.contains(key))
      throw std::runtime_error(std::string("channel file: missing field ") +
                               key);
  ChannelModel ch;
  ch.input_dims = dims_from_json(j["input_dims"], "input_dims");
  ch.state_dims = dims_from_json(j["state_dims"], "state_dims");
  ch.output_dims = dims_from_json(j["output_dims"], "output_dims");
  for (std::size_t r = 0; r < j["rows"].size(); ++r)
    ch.rows.push_back(probs_from_json(j["rows"][r], "rows", r));
  for (std::size_t r = 0; r < j["cost_fns"].size(); ++r)
    ch.cost_fns.push_back(probs_from_json(j["cost_fns"][r], "cost_fns", r));
  ch.cost_budgets = probs_from_json(j["cost_budgets"], "cost_budgets", 0);
  const auto slaw = probs_from_json(j["state_law"], "state_law", 0);
  if (!slaw.empty()) ch.state_law = Pmf{slaw};
  ch.validate();
  return ch;
}

ChannelModel load_channel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open channel file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return channel_from_text(ss.str());
}

void dump_channel(const ChannelModel& ch, const std::string& path) {
  ch.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write channel file: " + path);
  out << channel_to_text(ch);
}

}  // namespace cosetlab::channels
