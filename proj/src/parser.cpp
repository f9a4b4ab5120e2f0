#include "quadnet/parser.hpp"

#include <cctype>
#include <string>

#include "quadnet/error.hpp"

namespace quadnet {

namespace {

class PolyParser {
 public:
  PolyParser(std::string_view src, const VarTablePtr& vars, Field field, std::size_t line,
             std::size_t column_offset, const Definitions* defs)
      : src_(src), vars_(vars), field_(field), line_(line), column_offset_(column_offset), defs_(defs) {}

  Polynomial parse() {
    skip_ws();
    if (at_end()) fail("empty expression");
    Polynomial p = expr();
    skip_ws();
    if (!at_end()) fail(std::string("unexpected '") + src_[pos_] + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, line_, column_offset_ + pos_ + 1);
  }

  bool at_end() const { return pos_ >= src_.size(); }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (!at_end() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Polynomial expr() {
    Polynomial acc(vars_, field_);
    bool negate = false;
    if (accept('-'))
      negate = true;
    else
      accept('+');
    Polynomial t = term();
    acc += negate ? -t : t;
    for (;;) {
      if (accept('+'))
        acc += term();
      else if (accept('-'))
        acc -= term();
      else
        return acc;
    }
  }

  Polynomial term() {
    Polynomial acc = factor();
    for (;;) {
      if (accept('*')) {
        acc *= factor();
      } else if (accept('/')) {
        skip_ws();
        std::size_t at = pos_;
        mpz_class d = integer();
        if (d == 0) {
          pos_ = at;
          fail("division by zero");
        }
        acc = acc.scaled(mpq_class(1, 1) / mpq_class(d));
      } else {
        return acc;
      }
    }
  }

  Polynomial factor() {
    Polynomial base = atom();
    if (accept('^')) {
      skip_ws();
      mpz_class e = integer();
      if (e > 1000) fail("exponent too large");
      base = base.pow(static_cast<unsigned>(e.get_ui()));
    }
    return base;
  }

  Polynomial atom() {
    skip_ws();
    if (at_end()) fail("unexpected end of expression");
    char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      return Polynomial::constant(vars_, field_, mpq_class(integer()));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (!at_end() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
      std::string name(src_.substr(start, pos_ - start));
      if (auto idx = vars_->find(name)) return Polynomial::variable(vars_, field_, *idx);
      if (defs_) {
        if (auto it = defs_->find(name); it != defs_->end()) return expand(it->second, name, start);
      }
      pos_ = start;
      fail("unknown variable '" + name + "'");
    }
    fail(std::string("unexpected '") + c + "'");
  }

  Polynomial expand(const Definition& def, const std::string& name, std::size_t start) {
    Polynomial body = def.body;
    if (!same_table(body.vars(), vars_)) {
      pos_ = start;
      fail("'" + name + "' is defined over another variable table");
    }
    if (body.field() != field_) body = field_.is_prime() ? body.reduce_mod(field_.characteristic()) : body.lift_to_rationals();
    if (def.params.empty()) return body;
    if (!accept('(')) fail("'" + name + "' expects " + std::to_string(def.params.size()) + " arguments");
    std::vector<Polynomial> args{expr()};
    while (accept(',')) args.push_back(expr());
    if (!accept(')')) fail("expected ')'");
    if (args.size() != def.params.size()) {
      pos_ = start;
      fail("'" + name + "' expects " + std::to_string(def.params.size()) + " arguments, got " +
           std::to_string(args.size()));
    }
    std::map<std::size_t, Polynomial> assignment;
    for (std::size_t i = 0; i < args.size(); ++i) assignment.insert_or_assign(def.params[i], args[i]);
    return body.substitute(assignment);
  }

  mpz_class integer() {
    std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    return mpz_class(std::string(src_.substr(start, pos_ - start)));
  }

  std::string_view src_;
  const VarTablePtr& vars_;
  Field field_;
  std::size_t line_;
  std::size_t column_offset_;
  const Definitions* defs_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(std::string_view src, const VarTablePtr& vars, Field field, std::size_t line,
                            std::size_t column_offset, const Definitions* defs) {
  return PolyParser(src, vars, field, line, column_offset, defs).parse();
}

}  // namespace quadnet
