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

#include "sdrmap/uai.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "sdrmap/errors.hpp"

namespace sdrmap {
namespace {

struct Token {
  std::string text;
  int line;
};

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> tokens;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tok;
    bool first = true;
    while (ls >> tok) {
      if (first && tok[0] == 'c') break;
      first = false;
      tokens.push_back({tok, lineno});
    }
  }
  return tokens;
}

class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& next(const char* expected) {
    if (pos_ >= tokens_.size())
      throw ParseError(std::string("unexpected end of input, expected ") + expected, last_line());
    return tokens_[pos_++];
  }

  long long integer(const char* expected) {
    const Token& t = next(expected);
    char* end = nullptr;
    const long long v = std::strtoll(t.text.c_str(), &end, 10);
    if (end == t.text.c_str() || *end != '\0')
      throw ParseError(std::string("expected ") + expected + ", got '" + t.text + "'", t.line);
    return v;
  }

  double real(const char* expected, int* line) {
    const Token& t = next(expected);
    char* end = nullptr;
    const double v = std::strtod(t.text.c_str(), &end);
    if (end == t.text.c_str() || *end != '\0' || !std::isfinite(v))
      throw ParseError(std::string("expected ") + expected + ", got '" + t.text + "'", t.line);
    *line = t.line;
    return v;
  }

  bool done() const { return pos_ >= tokens_.size(); }
  int line() const { return pos_ < tokens_.size() ? tokens_[pos_].line : last_line(); }

 private:
  int last_line() const { return tokens_.empty() ? 1 : tokens_.back().line; }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

UaiModel parse_uai(const std::string& text) {
  TokenStream ts(tokenize(text));
  const Token& header = ts.next("preamble");
  if (header.text == "BAYES")
    throw ParseError("BAYES networks are not supported; only MARKOV models are accepted",
                     header.line);
  if (header.text != "MARKOV")
    throw ParseError("expected MARKOV preamble, got '" + header.text + "'", header.line);

  UaiModel model;
  int line = ts.line();
  const long long n = ts.integer("variable count");
  if (n < 0) throw ParseError("negative variable count", line);
  for (long long i = 0; i < n; ++i) {
    line = ts.line();
    const long long card = ts.integer("cardinality");
    if (card < 1 || card > std::numeric_limits<int>::max())
      throw ParseError("cardinality must be positive", line);
    model.cardinalities.push_back(static_cast<int>(card));
  }
  line = ts.line();
  const long long f = ts.integer("factor count");
  if (f < 0) throw ParseError("negative factor count", line);
  for (long long k = 0; k < f; ++k) {
    line = ts.line();
    const long long arity = ts.integer("scope size");
    if (arity < 1) throw ParseError("factor scope must not be empty", line);
    if (arity > 2) throw ParseError("factor of arity " + std::to_string(arity) +
                                        " is not pairwise", line);
    std::vector<int> scope;
    for (long long a = 0; a < arity; ++a) {
      line = ts.line();
      const long long v = ts.integer("scope variable");
      if (v < 0 || v >= n) throw ParseError("scope variable out of range", line);
      scope.push_back(static_cast<int>(v));
    }
    if (scope.size() == 2 && scope[0] == scope[1])
      throw ParseError("pairwise scope repeats a variable", line);
    model.scopes.push_back(std::move(scope));
  }
  for (long long k = 0; k < f; ++k) {
    std::size_t expected = 1;
    for (int v : model.scopes[static_cast<std::size_t>(k)])
      expected *= static_cast<std::size_t>(model.cardinalities[static_cast<std::size_t>(v)]);
    line = ts.line();
    const long long count = ts.integer("table length");
    if (count < 0 || static_cast<std::size_t>(count) != expected)
      throw ParseError("table length " + std::to_string(count) + " does not match scope size " +
                           std::to_string(expected), line);
    std::vector<double> table;
    table.reserve(expected);
    for (std::size_t e = 0; e < expected; ++e) {
      int vline = 0;
      const double v = ts.real("table entry", &vline);
      if (v < 0.0) throw ParseError("negative table entry", vline);
      table.push_back(v);
    }
    model.tables.push_back(std::move(table));
  }
  if (!ts.done()) throw ParseError("trailing tokens after last table", ts.line());
  return model;
}

UaiModel read_uai_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_uai(buf.str());
}

std::string print_uai(const UaiModel& model) {
  std::ostringstream out;
  out.precision(std::numeric_limits<double>::max_digits10);
  out << "MARKOV\n" << model.cardinalities.size() << "\n";
  for (std::size_t i = 0; i < model.cardinalities.size(); ++i)
    out << (i ? " " : "") << model.cardinalities[i];
  out << "\n" << model.scopes.size() << "\n";
  for (const auto& scope : model.scopes) {
    out << scope.size();
    for (int v : scope) out << " " << v;
    out << "\n";
  }
  for (const auto& table : model.tables) {
    out << "\n" << table.size() << "\n";
    for (std::size_t e = 0; e < table.size(); ++e) out << (e ? " " : "") << table[e];
    out << "\n";
  }
  return out.str();
}

void write_uai_file(const std::string& path, const UaiModel& model) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << print_uai(model);
  if (!out) throw Error("write to '" + path + "' failed");
}

PairwiseMRF to_mrf(const UaiModel& model) {
  if (model.scopes.size() != model.tables.size())
    throw InvalidModel("scope and table counts differ");
  MrfBuilder builder(model.cardinalities);
  auto potential = [](double p) {
    if (p < 0.0 || !std::isfinite(p)) throw InvalidModel("table entry must be non-negative");
    return std::log(std::max(p, kProbabilityFloor));
  };
  for (std::size_t k = 0; k < model.scopes.size(); ++k) {
    const auto& scope = model.scopes[k];
    const auto& table = model.tables[k];
    if (scope.empty() || scope.size() > 2)
      throw InvalidModel("factor " + std::to_string(k) + " is not unary or pairwise");
    for (int v : scope)
      if (v < 0 || v >= static_cast<int>(model.cardinalities.size()))
        throw InvalidModel("scope variable out of range");
    if (scope.size() == 1) {
      const int m = model.cardinalities[static_cast<std::size_t>(scope[0])];
      if (table.size() != static_cast<std::size_t>(m)) throw InvalidModel("table length mismatch");
      Eigen::VectorXd w(m);
      for (int a = 0; a < m; ++a) w(a) = potential(table[static_cast<std::size_t>(a)]);
      builder.add_unary(scope[0], w);
    } else {
      const int mi = model.cardinalities[static_cast<std::size_t>(scope[0])];
      const int mj = model.cardinalities[static_cast<std::size_t>(scope[1])];
      if (table.size() != static_cast<std::size_t>(mi) * static_cast<std::size_t>(mj))
        throw InvalidModel("table length mismatch");
      Eigen::MatrixXd w(mi, mj);
      for (int a = 0; a < mi; ++a)
        for (int b = 0; b < mj; ++b)
          w(a, b) = potential(table[static_cast<std::size_t>(a) * static_cast<std::size_t>(mj) +
                                    static_cast<std::size_t>(b)]);
      builder.add_pairwise(scope[0], scope[1], w);
    }
  }
  return builder.build();
}

UaiModel from_mrf(const PairwiseMRF& mrf) {
  UaiModel model;
  model.cardinalities = mrf.states();
  for (int i = 0; i < mrf.num_vars(); ++i) {
    model.scopes.push_back({i});
    std::vector<double> t;
    for (Index a = 0; a < mrf.unary(i).size(); ++a) t.push_back(std::exp(mrf.unary(i)(a)));
    model.tables.push_back(std::move(t));
  }
  for (std::size_t e = 0; e < mrf.num_edges(); ++e) {
    const Edge& ed = mrf.edges()[e];
    model.scopes.push_back({ed.i, ed.j});
    const Eigen::MatrixXd& w = mrf.pairwise(e);
    std::vector<double> t;
    for (Index a = 0; a < w.rows(); ++a)
      for (Index b = 0; b < w.cols(); ++b) t.push_back(std::exp(w(a, b)));
    model.tables.push_back(std::move(t));
  }
  return model;
}

}  // namespace sdrmap
