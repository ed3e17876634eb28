#include "qhaar/expr.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace qhaar {

Atom u_pow(int k) {
  if (k == 0 || k < -64 || k > 64) throw std::invalid_argument("unitary power must be nonzero with |k| <= 64");
  Atom a;
  a.upow = k;
  return a;
}

Atom fixed_op(std::string name, bool dagger) {
  if (name.empty()) throw std::invalid_argument("empty operator name");
  Atom a;
  a.op = std::move(name);
  a.dagger = dagger;
  return a;
}

UnitaryCount unitary_count(const MomentExpression& expr) {
  UnitaryCount c;
  for (const auto& word : expr.words)
    for (const auto& atom : word) {
      if (atom.upow > 0) c.n_u += atom.upow;
      if (atom.upow < 0) c.n_udag -= atom.upow;
    }
  return c;
}

TraceWord conjugated(const TraceWord& word) {
  TraceWord out;
  out.reserve(word.size());
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    Atom a = *it;
    if (a.upow != 0)
      a.upow = -a.upow;
    else
      a.dagger = !a.dagger;
    out.push_back(std::move(a));
  }
  return out;
}

TraceWord merge_powers(const TraceWord& word) {
  TraceWord out;
  for (const auto& atom : word) {
    if (atom.upow != 0 && !out.empty() && out.back().upow != 0) {
      const int s = out.back().upow + atom.upow;
      out.pop_back();
      if (s != 0) {
        Atom merged;
        merged.upow = s;
        out.push_back(merged);
      }
    } else {
      out.push_back(atom);
    }
  }
  while (out.size() > 1 && out.front().upow != 0 && out.back().upow != 0) {
    const int s = out.back().upow + out.front().upow;
    out.pop_back();
    out.erase(out.begin());
    if (s != 0) {
      Atom merged;
      merged.upow = s;
      out.insert(out.begin(), merged);
    }
  }
  return out;
}

namespace {

struct Lexer {
  const std::string& text;
  size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool eat(const std::string& tok) {
    skip_ws();
    if (text.compare(pos, tok.size(), tok) == 0) {
      pos += tok.size();
      return true;
    }
    return false;
  }
  bool peek(char c) {
    skip_ws();
    return pos < text.size() && text[pos] == c;
  }
  bool done() {
    skip_ws();
    return pos >= text.size();
  }
  std::string ident() {
    skip_ws();
    size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    return text.substr(start, pos - start);
  }
  long number() {
    skip_ws();
    size_t start = pos;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start) throw std::invalid_argument("expected integer in expression text");
    return std::stol(text.substr(start, pos - start));
  }
  double real_number() {
    skip_ws();
    size_t start = pos;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start) throw std::invalid_argument("expected number in expression text");
    if (pos < text.size() && text[pos] == '.') {
      ++pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    return std::stod(text.substr(start, pos - start));
  }
};

}  // namespace

MomentExpression parse_expression(const std::string& text) {
  MomentExpression expr;
  Lexer lex{text};
  bool parsed_scalar = false;
  while (!lex.done()) {
    if (lex.eat("tr[")) {
      TraceWord word;
      while (!lex.eat("]")) {
        if (lex.done()) throw std::invalid_argument("unterminated trace word");
        std::string name = lex.ident();
        if (name.empty()) throw std::invalid_argument("unexpected token in trace word");
        if (name == "U") {
          if (lex.pos < lex.text.size() && lex.text[lex.pos] == '^')
            ++lex.pos, word.push_back(u_pow(static_cast<int>(lex.number())));
          else
            word.push_back(u_pow(1));
        } else {
          bool dag = lex.pos < lex.text.size() && lex.text[lex.pos] == '\'';
          if (dag) ++lex.pos;
          word.push_back(fixed_op(std::move(name), dag));
        }
      }
      if (word.empty()) throw std::invalid_argument("empty trace word");
      expr.words.push_back(std::move(word));
      if (!lex.done() && !lex.eat("*")) throw std::invalid_argument("expected '*' between factors");
    } else if (lex.eat("q^")) {
      if (!expr.words.empty())
        throw std::invalid_argument("scalar factors must lead the expression");
      expr.qpow += static_cast<int>(lex.number());
      if (!lex.eat("*")) throw std::invalid_argument("expected '*' after scalar factor");
    } else if (lex.peek('-') || lex.peek('+') ||
               (!lex.done() && std::isdigit(static_cast<unsigned char>(lex.text[lex.pos])))) {
      if (parsed_scalar || !expr.words.empty())
        throw std::invalid_argument("scalar factors must lead the expression");
      double value = lex.real_number();
      if (lex.eat("/")) value /= lex.real_number();
      expr.prefactor *= value;
      parsed_scalar = true;
      if (!lex.eat("*")) throw std::invalid_argument("expected '*' after scalar factor");
    } else {
      throw std::invalid_argument("unexpected token in expression text");
    }
  }
  if (expr.words.empty()) throw std::invalid_argument("expression has no trace words");
  return expr;
}

std::string to_string(const MomentExpression& expr) {
  std::ostringstream out;
  out.precision(17);
  if (expr.prefactor != std::complex<double>(1.0, 0.0)) {
    if (expr.prefactor.imag() == 0.0)
      out << expr.prefactor.real();
    else
      out << "(" << expr.prefactor.real() << "," << expr.prefactor.imag() << ")";
    out << " * ";
  }
  if (expr.qpow != 0) out << "q^" << expr.qpow << " * ";
  for (size_t w = 0; w < expr.words.size(); ++w) {
    if (w) out << " * ";
    out << "tr[";
    for (const auto& atom : expr.words[w]) {
      out << ' ';
      if (atom.upow == 1)
        out << 'U';
      else if (atom.upow != 0)
        out << "U^" << atom.upow;
      else
        out << atom.op << (atom.dagger ? "'" : "");
    }
    out << " ]";
  }
  return out.str();
}

std::complex<double> evaluate_at(const MomentExpression& expr, const Eigen::MatrixXcd& u) {
  const auto q = u.rows();
  if (u.cols() != q) throw std::invalid_argument("unitary must be square");
  std::unordered_map<int, Eigen::MatrixXcd> powers;
  powers.emplace(0, Eigen::MatrixXcd::Identity(q, q));
  powers.emplace(1, u);
  auto positive_power = [&](int k) -> const Eigen::MatrixXcd& {
    int j = k;
    while (!powers.count(j)) --j;
    for (; j < k; ++j) powers.emplace(j + 1, Eigen::MatrixXcd(powers.at(j) * u));
    return powers.at(k);
  };
  auto u_power = [&](int k) -> const Eigen::MatrixXcd& {
    if (k >= 0) return positive_power(k);
    auto it = powers.find(k);
    if (it != powers.end()) return it->second;
    return powers.emplace(k, positive_power(-k).adjoint()).first->second;
  };

  std::complex<double> result = expr.prefactor * std::pow(static_cast<double>(q), expr.qpow);
  for (const auto& raw : expr.words) {
    const TraceWord word = merge_powers(raw);
    if (word.empty()) {
      result *= static_cast<double>(q);
      continue;
    }
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(q, q);
    for (const auto& atom : word) {
      if (atom.upow != 0) {
        acc = acc * u_power(atom.upow);
      } else {
        auto it = expr.operators.find(atom.op);
        if (it == expr.operators.end())
          throw std::invalid_argument("unbound operator: " + atom.op);
        if (it->second.rows() != q || it->second.cols() != q)
          throw std::invalid_argument("operator dimension mismatch: " + atom.op);
        if (atom.dagger)
          acc = acc * it->second.adjoint();
        else
          acc = acc * it->second;
      }
    }
    result *= acc.trace();
  }
  return result;
}

}  // namespace qhaar
