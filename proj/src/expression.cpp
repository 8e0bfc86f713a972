#include "regtree/expression.hpp"

#include <cctype>
#include <vector>

namespace regtree {

namespace {

class Parser {
 public:
  Parser(const std::string& s, const RankedAlphabet* a) : src_(s), alpha_(a) {}

  Sys run(std::optional<unsigned> rank) {
    auto top = sum();
    skip();
    if (pos_ != src_.size()) throw ExpressionError("unexpected '" + std::string(1, src_[pos_]) + "'", pos_);
    for (const auto& t : top) {
      if (t.var) throw ExpressionError("a variable cannot be the whole expression", 0);
      sys_.initial[t.idx] = 1;
    }
    if (rank) {
      if (*rank < max_var_) throw ExpressionError("variable x" + std::to_string(max_var_) + " exceeds the rank", 0);
      sys_.rank = *rank;
    } else {
      sys_.rank = max_var_;
    }
    return std::move(sys_);
  }

 private:
  void skip() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::vector<Target> sum() {
    std::vector<Target> r = term();
    while (eat('+')) {
      auto t = term();
      r.insert(r.end(), t.begin(), t.end());
    }
    return r;
  }

  std::vector<Target> term() {
    skip();
    std::size_t start = pos_;
    std::string name;
    if (src_.compare(pos_, 2, "[]") == 0) {
      name = "[]";
      pos_ += 2;
    } else {
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' || src_[pos_] == '{' ||
              src_[pos_] == '}' || (src_[pos_] == ',' && in_braces(start))))
        ++pos_;
      name = src_.substr(start, pos_ - start);
    }
    if (name.empty()) throw ExpressionError("expected a symbol or variable", start);
    if (name.size() > 1 && name[0] == 'x' && name.find_first_not_of("0123456789", 1) == std::string::npos) {
      unsigned i = std::stoul(name.substr(1));
      if (i == 0) throw ExpressionError("variables are numbered from 1", start);
      max_var_ = std::max(max_var_, i);
      return {Target::variable(i)};
    }
    std::vector<std::vector<Target>> args;
    if (eat('(')) {
      args.push_back(sum());
      while (eat(',')) args.push_back(sum());
      if (!eat(')')) throw ExpressionError("expected ')'", pos_);
    }
    unsigned rank = static_cast<unsigned>(args.size());
    if (alpha_ && name != "[]") {
      auto sym = alpha_->find(name);
      if (!sym) throw ExpressionError("unknown symbol '" + name + "'", start);
      if (sym->rank != rank)
        throw ExpressionError("symbol '" + name + "' has rank " + std::to_string(sym->rank) + " but " +
                                  std::to_string(rank) + " arguments",
                              start);
    }
    Vertex v = sys_.add_vertex(Symbol{name, rank});
    for (unsigned d = 0; d < args.size(); ++d)
      for (const auto& t : args[d]) {
        sys_.add_edge(v, d + 1, t);
        if (!t.var) sys_.initial[t.idx] = 0;
      }
    return {Target::vertex(v)};
  }

  // Valuation names such as "{p,q}_2" contain commas inside braces.
  bool in_braces(std::size_t start) const {
    int depth = 0;
    for (std::size_t i = start; i < pos_; ++i) {
      if (src_[i] == '{') ++depth;
      if (src_[i] == '}') --depth;
    }
    return depth > 0;
  }

  const std::string& src_;
  const RankedAlphabet* alpha_;
  std::size_t pos_ = 0;
  unsigned max_var_ = 0;
  Sys sys_;
};

}  // namespace

Sys from_expression(const std::string& expr, const RankedAlphabet* alphabet, std::optional<unsigned> rank) {
  return Parser(expr, alphabet).run(rank);
}

}  // namespace regtree
