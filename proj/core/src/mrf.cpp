/*
 * Copyright 2026 The sdrmap Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "sdrmap/mrf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sdrmap/errors.hpp"
#include "sdrmap/parallel.hpp"

namespace sdrmap {

BlockLayout::BlockLayout(const std::vector<int>& states) : sizes_(states) {
  offsets_.reserve(states.size());
  Index off = 0;
  for (int m : states) {
    offsets_.push_back(off);
    off += m;
  }
  total_ = off;
}

namespace {

bool all_finite(const Eigen::MatrixXd& m) { return m.allFinite(); }

}  // namespace

PairwiseMRF::PairwiseMRF(std::vector<int> states, std::vector<Eigen::VectorXd> unary,
                         std::vector<Edge> edges, std::vector<Eigen::MatrixXd> pairwise)
    : states_(std::move(states)) {
  const int n = num_vars();
  for (int i = 0; i < n; ++i) {
    if (states_[static_cast<std::size_t>(i)] < 1)
      throw InvalidModel("variable " + std::to_string(i) + " has no states");
  }
  layout_ = BlockLayout(states_);

  if (unary.empty()) {
    unary.resize(static_cast<std::size_t>(n));
  }
  if (static_cast<int>(unary.size()) != n)
    throw InvalidModel("unary list length does not match variable count");
  for (int i = 0; i < n; ++i) {
    auto& w = unary[static_cast<std::size_t>(i)];
    if (w.size() == 0) w = Eigen::VectorXd::Zero(num_states(i));
    if (w.size() != num_states(i))
      throw InvalidModel("unary " + std::to_string(i) + " has wrong length");
    if (!all_finite(w))
      throw InvalidModel("unary " + std::to_string(i) + " is not finite");
  }
  unary_ = std::move(unary);

  if (edges.size() != pairwise.size())
    throw InvalidModel("edge and pairwise table counts differ");
  std::vector<std::pair<Edge, Eigen::MatrixXd>> terms;
  terms.reserve(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    Edge ed = edges[e];
    Eigen::MatrixXd w = std::move(pairwise[e]);
    if (ed.i < 0 || ed.j < 0 || ed.i >= n || ed.j >= n)
      throw InvalidModel("edge references an unknown variable");
    if (ed.i == ed.j) throw InvalidModel("self loop on variable " + std::to_string(ed.i));
    if (ed.i > ed.j) {
      std::swap(ed.i, ed.j);
      w.transposeInPlace();
    }
    if (w.rows() != num_states(ed.i) || w.cols() != num_states(ed.j))
      throw InvalidModel("pairwise table (" + std::to_string(ed.i) + "," +
                         std::to_string(ed.j) + ") has wrong shape");
    if (!all_finite(w)) throw InvalidModel("pairwise table is not finite");
    terms.emplace_back(ed, std::move(w));
  }
  std::sort(terms.begin(), terms.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t e = 1; e < terms.size(); ++e) {
    if (terms[e].first == terms[e - 1].first)
      throw InvalidModel("duplicate edge (" + std::to_string(terms[e].first.i) + "," +
                         std::to_string(terms[e].first.j) + ")");
  }
  incident_.assign(static_cast<std::size_t>(n), {});
  for (std::size_t e = 0; e < terms.size(); ++e) {
    edges_.push_back(terms[e].first);
    pairwise_.push_back(std::move(terms[e].second));
    incident_[static_cast<std::size_t>(edges_.back().i)].push_back(e);
    incident_[static_cast<std::size_t>(edges_.back().j)].push_back(e);
  }
}

std::optional<std::size_t> PairwiseMRF::find_edge(int i, int j) const {
  if (i > j) std::swap(i, j);
  const Edge key{i, j};
  auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || !(*it == key)) return std::nullopt;
  return static_cast<std::size_t>(it - edges_.begin());
}

std::uint64_t PairwiseMRF::state_space_size() const {
  std::uint64_t total = 1;
  for (int m : states_) {
    const auto um = static_cast<std::uint64_t>(m);
    if (total > std::numeric_limits<std::uint64_t>::max() / um)
      return std::numeric_limits<std::uint64_t>::max();
    total *= um;
  }
  return total;
}

PairwiseMRF PairwiseMRF::negated() const {
  std::vector<Eigen::VectorXd> u;
  u.reserve(unary_.size());
  for (const auto& w : unary_) u.push_back(-w);
  std::vector<Eigen::MatrixXd> p;
  p.reserve(pairwise_.size());
  for (const auto& w : pairwise_) p.push_back(-w);
  return PairwiseMRF(states_, std::move(u), edges_, std::move(p));
}

MrfBuilder::MrfBuilder(std::vector<int> states) : states_(std::move(states)) {
  for (int m : states_) {
    if (m < 1) throw InvalidModel("state counts must be positive");
    unary_.push_back(Eigen::VectorXd::Zero(m));
  }
}

MrfBuilder& MrfBuilder::add_unary(int i, const Eigen::VectorXd& w) {
  if (i < 0 || i >= static_cast<int>(states_.size()))
    throw InvalidModel("unary on unknown variable " + std::to_string(i));
  auto& u = unary_[static_cast<std::size_t>(i)];
  if (w.size() != u.size()) throw InvalidModel("unary has wrong length");
  u += w;
  return *this;
}

MrfBuilder& MrfBuilder::add_pairwise(int i, int j, const Eigen::MatrixXd& w) {
  const int n = static_cast<int>(states_.size());
  if (i < 0 || j < 0 || i >= n || j >= n)
    throw InvalidModel("pairwise term on unknown variable");
  if (i == j) throw InvalidModel("self loop on variable " + std::to_string(i));
  Eigen::MatrixXd t = (i < j) ? w : Eigen::MatrixXd(w.transpose());
  Edge e{std::min(i, j), std::max(i, j)};
  if (t.rows() != states_[static_cast<std::size_t>(e.i)] ||
      t.cols() != states_[static_cast<std::size_t>(e.j)])
    throw InvalidModel("pairwise table has wrong shape");
  for (auto& [edge, table] : terms_) {
    if (edge == e) {
      table += t;
      return *this;
    }
  }
  terms_.emplace_back(e, std::move(t));
  return *this;
}

MrfBuilder& MrfBuilder::add_edge(int i, int j) {
  const int lo = std::min(i, j), hi = std::max(i, j);
  return add_pairwise(lo, hi,
                      Eigen::MatrixXd::Zero(states_.at(static_cast<std::size_t>(lo)),
                                            states_.at(static_cast<std::size_t>(hi))));
}

PairwiseMRF MrfBuilder::build() const {
  std::vector<Edge> edges;
  std::vector<Eigen::MatrixXd> tables;
  for (const auto& [e, t] : terms_) {
    edges.push_back(e);
    tables.push_back(t);
  }
  return PairwiseMRF(states_, unary_, std::move(edges), std::move(tables));
}

void validate(const PairwiseMRF& mrf, const Assignment& a) {
  if (static_cast<int>(a.size()) != mrf.num_vars())
    throw InvalidAssignment("assignment has " + std::to_string(a.size()) +
                            " entries, model has " + std::to_string(mrf.num_vars()) +
                            " variables");
  for (int i = 0; i < mrf.num_vars(); ++i) {
    const int s = a.states[static_cast<std::size_t>(i)];
    if (s < 0 || s >= mrf.num_states(i))
      throw InvalidAssignment("state " + std::to_string(s) + " out of range for variable " +
                              std::to_string(i));
  }
}

namespace {

double energy_unchecked(const PairwiseMRF& mrf, const int* a) {
  double f = 0.0;
  for (int i = 0; i < mrf.num_vars(); ++i) f += mrf.unary(i)(a[i]);
  const auto& edges = mrf.edges();
  for (std::size_t e = 0; e < edges.size(); ++e)
    f += mrf.pairwise(e)(a[edges[e].i], a[edges[e].j]);
  return f;
}

}  // namespace

double energy(const PairwiseMRF& mrf, const Assignment& a) {
  validate(mrf, a);
  return energy_unchecked(mrf, a.states.data());
}

IndicatorVector to_indicator(const PairwiseMRF& mrf, const Assignment& a) {
  validate(mrf, a);
  IndicatorVector out{Eigen::VectorXd::Zero(mrf.layout().total())};
  for (int i = 0; i < mrf.num_vars(); ++i)
    out.x(mrf.layout().offset(i) + a.states[static_cast<std::size_t>(i)]) = 1.0;
  return out;
}

Assignment from_indicator(const PairwiseMRF& mrf, const IndicatorVector& x, double tol) {
  const auto& layout = mrf.layout();
  if (x.x.size() != layout.total())
    throw ConversionError("indicator has length " + std::to_string(x.x.size()) +
                          ", expected " + std::to_string(layout.total()));
  Assignment a;
  a.states.resize(static_cast<std::size_t>(mrf.num_vars()));
  for (int i = 0; i < mrf.num_vars(); ++i) {
    int hot = -1;
    for (int s = 0; s < layout.size(i); ++s) {
      const double v = x.x(layout.offset(i) + s);
      if (std::abs(v - 1.0) <= tol) {
        if (hot >= 0) throw ConversionError("block " + std::to_string(i) + " has two ones");
        hot = s;
      } else if (std::abs(v) > tol) {
        throw ConversionError("block " + std::to_string(i) + " is not binary");
      }
    }
    if (hot < 0) throw ConversionError("block " + std::to_string(i) + " has no one");
    a.states[static_cast<std::size_t>(i)] = hot;
  }
  return a;
}

Assignment blockwise_argmax(const PairwiseMRF& mrf, const Eigen::VectorXd& x) {
  const auto& layout = mrf.layout();
  if (x.size() != layout.total()) throw DimensionMismatch("indicator length mismatch");
  Assignment a;
  a.states.resize(static_cast<std::size_t>(mrf.num_vars()));
  for (int i = 0; i < mrf.num_vars(); ++i) {
    int best = 0;
    for (int s = 1; s < layout.size(i); ++s)
      if (x(layout.offset(i) + s) > x(layout.offset(i) + best)) best = s;
    a.states[static_cast<std::size_t>(i)] = best;
  }
  return a;
}

double indicator_objective(const PairwiseMRF& mrf, const Eigen::VectorXd& x) {
  const auto& layout = mrf.layout();
  if (x.size() != layout.total()) throw DimensionMismatch("indicator length mismatch");
  double f = 0.0;
  for (int i = 0; i < mrf.num_vars(); ++i)
    f += mrf.unary(i).dot(x.segment(layout.offset(i), layout.size(i)));
  const auto& edges = mrf.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto xi = x.segment(layout.offset(edges[e].i), layout.size(edges[e].i));
    const auto xj = x.segment(layout.offset(edges[e].j), layout.size(edges[e].j));
    f += xi.dot(mrf.pairwise(e) * xj);
  }
  return f;
}

MapResult brute_force_map(const PairwiseMRF& mrf, std::uint64_t cap, int threads) {
  const std::uint64_t total = mrf.state_space_size();
  if (total > cap)
    throw OracleTooLarge("state space " +
                         (total == std::numeric_limits<std::uint64_t>::max()
                              ? std::string("overflows")
                              : std::to_string(total)) +
                         " exceeds oracle cap " + std::to_string(cap));
  const int n = mrf.num_vars();
  if (n == 0) return {Assignment{}, 0.0};

  // Index order is lexicographic with variable 0 most significant, so within a
  // chunk the first maximizer seen is the lexicographically smallest one.
  if (threads <= 0) threads = thread_count();
  const std::uint64_t min_chunk = 1 << 14;
  std::int64_t chunks = static_cast<std::int64_t>(
      std::min<std::uint64_t>(static_cast<std::uint64_t>(threads) * 4,
                              std::max<std::uint64_t>(1, total / min_chunk)));
  std::vector<double> best_value(static_cast<std::size_t>(chunks),
                                 -std::numeric_limits<double>::infinity());
  std::vector<std::uint64_t> best_index(static_cast<std::size_t>(chunks), 0);

  parallel_for(chunks, threads, [&](std::int64_t c) {
    const std::uint64_t begin = total * static_cast<std::uint64_t>(c) /
                                static_cast<std::uint64_t>(chunks);
    const std::uint64_t end = total * static_cast<std::uint64_t>(c + 1) /
                              static_cast<std::uint64_t>(chunks);
    std::vector<int> a(static_cast<std::size_t>(n));
    std::uint64_t rest = begin;
    for (int i = n - 1; i >= 0; --i) {
      const auto m = static_cast<std::uint64_t>(mrf.num_states(i));
      a[static_cast<std::size_t>(i)] = static_cast<int>(rest % m);
      rest /= m;
    }
    double best = -std::numeric_limits<double>::infinity();
    std::uint64_t arg = begin;
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      const double f = energy_unchecked(mrf, a.data());
      if (f > best) {
        best = f;
        arg = idx;
      }
      for (int i = n - 1; i >= 0; --i) {
        auto& s = a[static_cast<std::size_t>(i)];
        if (++s < mrf.num_states(i)) break;
        s = 0;
      }
    }
    best_value[static_cast<std::size_t>(c)] = best;
    best_index[static_cast<std::size_t>(c)] = arg;
  });

  std::size_t winner = 0;
  for (std::size_t c = 1; c < best_value.size(); ++c)
    if (best_value[c] > best_value[winner]) winner = c;

  MapResult result;
  result.energy = best_value[winner];
  result.assignment.states.resize(static_cast<std::size_t>(n));
  std::uint64_t rest = best_index[winner];
  for (int i = n - 1; i >= 0; --i) {
    const auto m = static_cast<std::uint64_t>(mrf.num_states(i));
    result.assignment.states[static_cast<std::size_t>(i)] = static_cast<int>(rest % m);
    rest /= m;
  }
  return result;
}

}  // namespace sdrmap
