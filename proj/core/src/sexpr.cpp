#include "shop2/sexpr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace shop2 {

bool operator==(const Number& a, const Number& b) {
  if (a.integral && b.integral) return a.integer == b.integer;
  return a.value() == b.value();
}

namespace {

std::string lowered(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

}  // namespace

SExpr SExpr::symbol(std::string_view name) {
  SExpr e;
  e.kind_ = Kind::Symbol;
  e.name_ = lowered(name);
  return e;
}

SExpr SExpr::variable(std::string_view name) {
  SExpr e;
  e.kind_ = Kind::Variable;
  e.name_ = lowered(name);
  return e;
}

SExpr SExpr::keyword(std::string_view name) {
  SExpr e;
  e.kind_ = Kind::Keyword;
  e.name_ = lowered(name);
  return e;
}

SExpr SExpr::functionRef(std::string_view name) {
  SExpr e;
  e.kind_ = Kind::FunctionRef;
  e.name_ = lowered(name);
  return e;
}

SExpr SExpr::number(Number n) {
  SExpr e;
  e.kind_ = Kind::Number;
  e.number_ = n;
  return e;
}

SExpr SExpr::list(std::vector<SExpr> items) {
  SExpr e;
  e.kind_ = Kind::List;
  e.items_ = std::move(items);
  return e;
}

bool operator==(const SExpr& a, const SExpr& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case SExpr::Kind::Number:
      return a.number_ == b.number_;
    case SExpr::Kind::List:
      return a.items_ == b.items_;
    default:
      return a.name_ == b.name_;
  }
}

ParseError::ParseError(const std::string& message, int line, int column)
    : std::runtime_error(message + " at line " + std::to_string(line) + ", column " +
                         std::to_string(column)),
      line_(line),
      column_(column) {}

namespace {

bool isDelimiter(char c) {
  return c == '(' || c == ')' || c == ';' || c == ' ' || c == '\t' || c == '\n' || c == '\r' ||
         c == '\f' || c == '\v';
}

// Accepts Common Lisp float exponent markers (e, d, f, l, s) so that
// literals such as 0.01L0 read as plain doubles.
bool parseNumber(std::string_view tok, Number& out) {
  std::size_t i = 0;
  const std::size_t n = tok.size();
  if (i < n && (tok[i] == '+' || tok[i] == '-')) ++i;
  std::size_t mantissaDigits = 0;
  bool sawPoint = false;
  bool sawExponent = false;
  while (i < n && std::isdigit(static_cast<unsigned char>(tok[i]))) {
    ++i;
    ++mantissaDigits;
  }
  if (i < n && tok[i] == '.') {
    sawPoint = true;
    ++i;
    while (i < n && std::isdigit(static_cast<unsigned char>(tok[i]))) {
      ++i;
      ++mantissaDigits;
    }
  }
  if (mantissaDigits == 0) return false;
  std::string normalized(tok.substr(0, i));
  if (i < n) {
    char m = static_cast<char>(std::tolower(static_cast<unsigned char>(tok[i])));
    if (m != 'e' && m != 'd' && m != 'f' && m != 'l' && m != 's') return false;
    ++i;
    std::size_t expStart = i;
    if (i < n && (tok[i] == '+' || tok[i] == '-')) ++i;
    std::size_t expDigits = 0;
    while (i < n && std::isdigit(static_cast<unsigned char>(tok[i]))) {
      ++i;
      ++expDigits;
    }
    if (expDigits == 0 || i != n) return false;
    sawExponent = true;
    normalized += 'e';
    normalized += tok.substr(expStart);
  }
  if (normalized.front() == '+') normalized.erase(0, 1);
  const char* first = normalized.data();
  const char* last = normalized.data() + normalized.size();
  if (!sawPoint && !sawExponent) {
    std::int64_t v = 0;
    auto res = std::from_chars(first, last, v);
    if (res.ec == std::errc() && res.ptr == last) {
      out = Number::ofInteger(v);
      return true;
    }
  }
  double d = 0.0;
  auto res = std::from_chars(first, last, d);
  if (res.ec != std::errc() || res.ptr != last) {
    if (res.ec == std::errc::result_out_of_range) {
      d = normalized[0] == '-' ? -std::numeric_limits<double>::infinity()
                               : std::numeric_limits<double>::infinity();
    } else {
      return false;
    }
  }
  out = Number::ofReal(d);
  return true;
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::vector<SExpr> readAll() {
    std::vector<SExpr> forms;
    while (true) {
      skipBlank();
      if (atEnd()) break;
      forms.push_back(readForm());
    }
    return forms;
  }

 private:
  bool atEnd() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skipBlank() {
    while (!atEnd()) {
      char c = peek();
      if (c == ';') {
        while (!atEnd() && peek() != '\n') advance();
      } else if (isDelimiter(c) && c != '(' && c != ')') {
        advance();
      } else {
        break;
      }
    }
  }

  SExpr readForm() {
    int line = line_;
    int col = col_;
    char c = peek();
    if (c == ')') throw ParseError("unbalanced ')'", line, col);
    if (c == '(') {
      advance();
      std::vector<SExpr> items;
      while (true) {
        skipBlank();
        if (atEnd()) throw ParseError("unbalanced '(' opened here", line, col);
        if (peek() == ')') {
          advance();
          break;
        }
        items.push_back(readForm());
      }
      return SExpr::list(std::move(items));
    }
    std::size_t start = pos_;
    while (!atEnd() && !isDelimiter(peek())) advance();
    return classify(text_.substr(start, pos_ - start), line, col);
  }

  static SExpr classify(std::string_view tok, int line, int col) {
    if (tok.find('"') != std::string_view::npos || tok.find('`') != std::string_view::npos ||
        tok.find(',') != std::string_view::npos || tok.find('|') != std::string_view::npos) {
      throw ParseError("illegal token '" + std::string(tok) + "'", line, col);
    }
    if (tok[0] == '\'') throw ParseError("quote syntax is not supported", line, col);
    if (tok[0] == '#') {
      if (tok.size() > 2 && tok[1] == '\'') return SExpr::functionRef(tok.substr(2));
      throw ParseError("illegal token '" + std::string(tok) + "'", line, col);
    }
    if (tok[0] == '?') {
      if (tok.size() == 1) throw ParseError("empty variable name '?'", line, col);
      return SExpr::variable(tok.substr(1));
    }
    if (tok[0] == ':') {
      if (tok.size() == 1) throw ParseError("empty keyword ':'", line, col);
      return SExpr::keyword(tok.substr(1));
    }
    Number num;
    if (parseNumber(tok, num)) return SExpr::number(num);
    return SExpr::symbol(tok);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

void printTo(const SExpr& e, std::string& out) {
  switch (e.kind()) {
    case SExpr::Kind::Symbol:
      out += e.name();
      break;
    case SExpr::Kind::Variable:
      out += '?';
      out += e.name();
      break;
    case SExpr::Kind::Keyword:
      out += ':';
      out += e.name();
      break;
    case SExpr::Kind::FunctionRef:
      out += "#'";
      out += e.name();
      break;
    case SExpr::Kind::Number:
      out += printNumber(e.number());
      break;
    case SExpr::Kind::List: {
      out += '(';
      bool first = true;
      for (const auto& item : e.items()) {
        if (!first) out += ' ';
        first = false;
        printTo(item, out);
      }
      out += ')';
      break;
    }
  }
}

void prettyTo(const SExpr& e, int indent, int width, std::string& out) {
  std::string flat = print(e);
  if (!e.isList() || static_cast<int>(flat.size()) + indent <= width || e.items().size() < 2) {
    out += flat;
    return;
  }
  out += '(';
  const auto& items = e.items();
  std::size_t i = 0;
  // Keep a leading head symbol and its first argument on the opening line.
  std::string head;
  if (!items[0].isList()) {
    head = print(items[0]);
    out += head;
    i = 1;
    if (i < items.size() && !items[1].isList()) {
      out += ' ';
      out += print(items[1]);
      i = 2;
    }
  }
  int childIndent = indent + 1;
  if (i == 0) {
    prettyTo(items[0], childIndent, width, out);
    i = 1;
  }
  for (; i < items.size(); ++i) {
    out += '\n';
    out.append(static_cast<std::size_t>(childIndent + (head.empty() ? 0 : 1)), ' ');
    prettyTo(items[i], childIndent + (head.empty() ? 0 : 1), width, out);
  }
  out += ')';
}

}  // namespace

std::vector<SExpr> parseSExprs(std::string_view text) { return Reader(text).readAll(); }

SExpr parseSExpr(std::string_view text) {
  auto forms = parseSExprs(text);
  if (forms.size() != 1) {
    throw ParseError("expected exactly one form, found " + std::to_string(forms.size()), 1, 1);
  }
  return std::move(forms.front());
}

std::string printNumber(const Number& n) {
  if (n.integral) return std::to_string(n.integer);
  double d = n.real;
  if (std::isfinite(d) && d == std::floor(d) && std::fabs(d) < 1e15) {
    return std::to_string(static_cast<std::int64_t>(d));
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), d);
  return std::string(buf, res.ptr);
}

std::string print(const SExpr& e) {
  std::string out;
  printTo(e, out);
  return out;
}

std::string prettyPrint(const SExpr& e, int width) {
  std::string out;
  prettyTo(e, 0, width, out);
  return out;
}

}  // namespace shop2
