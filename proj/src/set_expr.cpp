#include <cctype>
#include <charconv>
#include <cmath>
#include <string>
#include <vector>

#include "limlab/errors.hpp"
#include "limlab/index_set.hpp"

namespace limlab {

namespace {

class SetParser {
 public:
  explicit SetParser(std::string_view text) : text_(text) {}

  IndexSet parse() {
    IndexSet out = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return out;
  }

 private:
  IndexSet expr() {
    IndexSet lhs = term();
    while (true) {
      if (accept('|')) {
        lhs = set_union(lhs, term());
      } else if (accept('-')) {
        lhs = set_difference(lhs, term());
      } else {
        return lhs;
      }
    }
  }

  IndexSet term() {
    IndexSet lhs = factor();
    while (accept('&')) lhs = set_intersection(lhs, factor());
    return lhs;
  }

  IndexSet factor() {
    if (accept('~')) return complement(factor());
    if (accept('(')) {
      IndexSet inner = expr();
      expect(')');
      return inner;
    }
    return atom();
  }

  IndexSet atom() {
    const std::string name = identifier();
    if (name == "evens") return evens();
    if (name == "odds") return odds();
    if (name == "naturals") return naturals();
    if (name == "integers") return integers();
    if (name == "empty") return empty_set();

    expect('(');
    if (name == "shift") {
      IndexSet inner = expr();
      expect(',');
      const std::int64_t k = integer();
      expect(')');
      return shift_set(inner, k);
    }
    if (name == "B") {
      expect(')');
      return appendix_b_set();
    }
    if (name == "set") {
      std::vector<std::int64_t> points;
      if (!accept(')')) {
        do {
          points.push_back(integer());
        } while (accept(','));
        expect(')');
      }
      return finite_set(std::move(points));
    }
    if (name == "Bprime") {
      const double a = real();
      expect(',');
      const double b = real();
      expect(')');
      return guarded([&] { return appendix_bprime_set(a, b); });
    }
    if (name == "bernoulli") {
      BernoulliSchemeSpec spec;
      spec.p = real();
      expect(',');
      spec.seed = unsigned_integer();
      if (accept(',')) spec.horizon = integer();
      expect(')');
      return guarded([&] { return bernoulli_scheme_set(spec); });
    }

    std::vector<std::int64_t> args{integer()};
    while (accept(',')) args.push_back(integer());
    expect(')');
    if (name == "residue" && args.size() == 2) return guarded([&] { return residue_class(args[0], args[1]); });
    if (name == "range" && args.size() == 2) return interval(args[0], args[1]);
    if (name == "progression" && (args.size() == 2 || args.size() == 3)) {
      return guarded([&] { return progression(args[0], args[1], args.size() == 3 ? args[2] : kPosInf); });
    }
    fail("unknown set constructor '" + name + "' with " + std::to_string(args.size()) + " arguments");
  }

  template <class F>
  IndexSet guarded(F&& build) {
    try {
      return build();
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }

  std::string identifier() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    if (start == pos_) fail("expected a set name");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string_view number_token() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '-' || text_[pos_] == '+' ||
            text_[pos_] == '.')) {
      ++pos_;
    }
    if (start == pos_) fail("expected a number");
    return text_.substr(start, pos_ - start);
  }

  std::int64_t integer() {
    const auto tok = number_token();
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) fail("expected an integer, got '" + std::string(tok) + "'");
    return v;
  }

  std::uint64_t unsigned_integer() {
    const auto tok = number_token();
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) fail("expected a seed, got '" + std::string(tok) + "'");
    return v;
  }

  double real() {
    auto tok = number_token();
    if (tok == "inf" || tok == "+inf") return INFINITY;
    if (tok == "-inf") return -INFINITY;
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    double v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) fail("expected a real, got '" + std::string(tok) + "'");
    return v;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("set expression '" + std::string(text_) + "' at offset " + std::to_string(pos_) + ": " + what);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

IndexSet parse_set(std::string_view text) { return SetParser(text).parse(); }

}  // namespace limlab
