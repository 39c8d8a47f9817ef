#include "graphctl/numbers.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

#include <boost/math/constants/constants.hpp>

namespace graphctl {

namespace {

// Relative rounding level of Real after a handful of operations.
const Real kRelativeEps = Real("1e-45");

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  Real parse() {
    Real v = expression();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("cannot parse number '" + s_ + "': " + what);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Real expression() {
    Real v = term();
    for (;;) {
      if (accept('+')) {
        v += term();
      } else if (accept('-')) {
        v -= term();
      } else {
        return v;
      }
    }
  }

  Real term() {
    Real v = factor();
    for (;;) {
      if (accept('*')) {
        v *= factor();
      } else if (accept('/')) {
        Real d = factor();
        if (d == 0) fail("division by zero");
        v /= d;
      } else {
        return v;
      }
    }
  }

  Real factor() {
    if (accept('-')) return -factor();
    if (accept('(')) {
      Real v = expression();
      if (!accept(')')) fail("missing ')'");
      return v;
    }
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return literal();
    if (std::isalpha(static_cast<unsigned char>(c))) return named();
    fail(std::string("unexpected character '") + c + "'");
  }

  Real literal() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' ||
            s_[pos_] == 'e' || s_[pos_] == 'E' ||
            ((s_[pos_] == '-' || s_[pos_] == '+') && pos_ > start &&
             (s_[pos_ - 1] == 'e' || s_[pos_ - 1] == 'E')))) {
      ++pos_;
    }
    try {
      return Real(s_.substr(start, pos_ - start));
    } catch (const std::exception&) {
      fail("bad numeric literal");
    }
  }

  Real named() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    const std::string name = s_.substr(start, pos_ - start);
    namespace bc = boost::math::constants;
    if (name == "e") return bc::e<Real>();
    if (name == "pi") return bc::pi<Real>();
    if (name == "phi") return bc::phi<Real>();
    if (name == "sqrt") {
      if (!accept('(')) fail("sqrt needs '('");
      Real arg = expression();
      if (!accept(')')) fail("missing ')'");
      if (arg < 0) fail("sqrt of a negative number");
      return boost::multiprecision::sqrt(arg);
    }
    if (name == "liouville") {
      if (!accept('(')) fail("liouville needs '('");
      const Real arg = expression();
      if (!accept(')')) fail("missing ')'");
      const int terms = arg.convert_to<int>();
      if (terms < 1 || terms > 4) fail("liouville(n) supports 1 <= n <= 4");
      Real sum = 0;
      long long factorial = 1;
      for (int k = 1; k <= terms; ++k) {
        factorial *= k;
        sum += boost::multiprecision::pow(Real(10), -static_cast<int>(factorial));
      }
      return sum;
    }
    fail("unknown name '" + name + "'");
  }

  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace

Number Number::from_double(double x) {
  Number n;
  n.value = Real(x);
  n.uncertainty = Real(std::abs(x) * 0x1p-52 + 0x1p-1074);
  n.expr = std::to_string(x);
  return n;
}

Number parse_number(const std::string& expr) {
  Number n;
  n.value = Parser(expr).parse();
  n.uncertainty = (boost::multiprecision::abs(n.value) + 1) * kRelativeEps;
  n.expr = expr;
  return n;
}

}  // namespace graphctl
