#include <cctype>
#include <cmath>
#include <map>
#include <set>

#include "bsq/preference.hpp"

// Recursive-descent parser for the preference DSL. Quantifiers and `for`
// blocks are unrolled by re-parsing their body once per constant binding, so
// the emitted AST is always the flat if/elif/else rule list.

namespace bsq {

namespace {

struct Token {
  enum class Kind { Ident, Number, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  double number = 0.0;
  bool is_integer = false;
  int line = 1, col = 1;
};

class Lexer {
public:
  explicit Lexer(const std::string& src) : src_(src) { tokenize(); }
  const std::vector<Token>& tokens() const { return toks_; }

private:
  void tokenize() {
    std::size_t i = 0;
    int line = 1, col = 1;
    auto advance = [&](std::size_t n) {
      for (std::size_t k = 0; k < n; ++k, ++i) {
        if (src_[i] == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
      }
    };
    while (i < src_.size()) {
      char c = src_[i];
      if (c == '#') {  // comment to end of line
        while (i < src_.size() && src_[i] != '\n') advance(1);
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
        continue;
      }
      Token t;
      t.line = line;
      t.col = col;
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = i;
        while (j < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_'))
          ++j;
        t.kind = Token::Kind::Ident;
        t.text = src_.substr(i, j - i);
        advance(j - i);
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '.' && i + 1 < src_.size() &&
                  std::isdigit(static_cast<unsigned char>(src_[i + 1])))) {
        std::size_t j = i;
        bool dot = false;
        while (j < src_.size() &&
               (std::isdigit(static_cast<unsigned char>(src_[j])) || src_[j] == '.')) {
          if (src_[j] == '.') dot = true;
          ++j;
        }
        t.kind = Token::Kind::Number;
        t.text = src_.substr(i, j - i);
        t.number = std::stod(t.text);
        t.is_integer = !dot;
        advance(j - i);
      } else {
        static const char* two[] = {"->", "<=", ">=", "==", "!="};
        std::string pair = src_.substr(i, 2);
        bool matched = false;
        for (const char* p : two)
          if (pair == p) {
            t.kind = Token::Kind::Punct;
            t.text = pair;
            advance(2);
            matched = true;
            break;
          }
        if (!matched) {
          t.kind = Token::Kind::Punct;
          t.text = std::string(1, c);
          advance(1);
        }
      }
      toks_.push_back(std::move(t));
    }
    Token end;
    end.kind = Token::Kind::End;
    end.line = line;
    end.col = col;
    toks_.push_back(end);
  }

  const std::string& src_;
  std::vector<Token> toks_;
};

const std::set<std::string> kKeywords = {"pref", "params", "if",     "elif",   "else",
                                         "for",  "forall", "exists", "in",     "and",
                                         "or",   "not",    "abs",    "P",      "true"};

struct Binding {
  std::string constant;  // name, used in variable/action grounding
  int code;              // index within the sort, used in static arguments
};

class Parser {
public:
  Parser(const std::string& text, const GPomdp& model) : lex_(text), model_(model) {
    toks_ = &lex_.tokens();
  }

  BsqPreference parse() {
    expect_ident("pref");
    pref_.name = expect_name();
    expect_punct("(");
    expect_ident("params");
    expect_punct(":");
    parse_params();
    expect_punct(")");
    expect_punct("{");
    bool saw_else = parse_clauses(/*top_level=*/true);
    if (!saw_else) fail(peek(), "preference must end with a terminal else rule");
    expect_punct("}");
    if (!at_punct(";") && peek().kind != Token::Kind::End)
      fail(peek(), "unexpected trailing input");
    pref_.params = space_;
    return std::move(pref_);
  }

private:
  [[noreturn]] void fail(const Token& t, const std::string& msg) {
    throw ParseError(t.line, t.col, msg + (t.kind == Token::Kind::End
                                               ? " (at end of input)"
                                               : " (near '" + t.text + "')"));
  }

  const Token& peek(int ahead = 0) const { return (*toks_)[std::min(pos_ + ahead, toks_->size() - 1)]; }
  const Token& get() { return (*toks_)[std::min(pos_++, toks_->size() - 1)]; }
  bool at_punct(const std::string& p) const {
    return peek().kind == Token::Kind::Punct && peek().text == p;
  }
  bool at_ident(const std::string& s) const {
    return peek().kind == Token::Kind::Ident && peek().text == s;
  }
  void expect_punct(const std::string& p) {
    if (!at_punct(p)) fail(peek(), "expected '" + p + "'");
    ++pos_;
  }
  void expect_ident(const std::string& s) {
    if (!at_ident(s)) fail(peek(), "expected '" + s + "'");
    ++pos_;
  }
  std::string expect_name() {
    const Token& t = get();
    if (t.kind != Token::Kind::Ident) fail(t, "expected identifier");
    if (kKeywords.count(t.text)) fail(t, "'" + t.text + "' is a reserved word");
    return t.text;
  }

  void parse_params() {
    std::vector<ParamSpace::Dim> dims;
    while (true) {
      std::string name = expect_name();
      expect_ident("in");
      expect_punct("[");
      double lo = expect_number();
      expect_punct(",");
      double hi = expect_number();
      if (at_punct(")") || at_punct("]"))
        ++pos_;  // either closer accepted; the domain is half-open regardless
      else
        fail(peek(), "expected ')' or ']' to close the parameter domain");
      dims.push_back({name, lo, hi});
      param_index_[name] = static_cast<int>(dims.size() - 1);
      if (at_punct(",")) {
        ++pos_;
        continue;
      }
      break;
    }
    space_ = std::make_shared<ParamSpace>(std::move(dims));
  }

  double expect_number() {
    bool neg = false;
    if (at_punct("-")) {
      neg = true;
      ++pos_;
    }
    const Token& t = get();
    if (t.kind != Token::Kind::Number) fail(t, "expected number");
    return neg ? -t.number : t.number;
  }

  // Returns true when the terminal else was consumed.
  bool parse_clauses(bool top_level) {
    bool saw_rule = false;
    while (true) {
      if (at_ident("if") || at_ident("elif")) {
        ++pos_;
        Rule r;
        r.condition = parse_cond();
        expect_punct("->");
        r.action_name = parse_action();
        expect_punct(";");
        pref_.rules.push_back(std::move(r));
        saw_rule = true;
      } else if (at_ident("for")) {
        parse_for_block();
        saw_rule = true;
      } else if (top_level && at_ident("else")) {
        ++pos_;
        expect_punct("->");
        Rule r;
        r.action_name = parse_action();
        expect_punct(";");
        pref_.rules.push_back(std::move(r));
        if (!saw_rule && pref_.rules.size() == 1)
          ;  // catchall-only preferences are allowed
        return true;
      } else {
        return false;
      }
    }
  }

  void parse_for_block() {
    expect_ident("for");
    std::string var = expect_name();
    expect_ident("in");
    const Token& sort_tok = get();
    if (sort_tok.kind != Token::Kind::Ident) fail(sort_tok, "expected sort name");
    const Sort* sort = model_.vocab.find_sort(sort_tok.text);
    if (!sort) fail(sort_tok, "unknown sort '" + sort_tok.text + "'");
    expect_punct("{");
    std::size_t body = pos_;
    if (sort->constants.empty()) fail(sort_tok, "sort '" + sort_tok.text + "' has no constants");
    for (std::size_t k = 0; k < sort->constants.size(); ++k) {
      pos_ = body;
      env_[var] = {sort->constants[k], static_cast<int>(k)};
      if (parse_clauses(/*top_level=*/false))
        fail(peek(), "else is only allowed at the top level");
    }
    env_.erase(var);
    expect_punct("}");
  }

  std::string parse_action() {
    std::string functor = expect_name();
    expect_punct("(");
    std::string out = functor + "(";
    bool first = true;
    while (!at_punct(")")) {
      if (!first) {
        expect_punct(",");
        out += ",";
      }
      first = false;
      const Token& t = get();
      if (t.kind == Token::Kind::Ident) {
        auto it = env_.find(t.text);
        out += (it != env_.end()) ? it->second.constant : t.text;
      } else if (t.kind == Token::Kind::Number && t.is_integer) {
        out += t.text;
      } else {
        fail(t, "bad action argument");
      }
    }
    ++pos_;  // ')'
    out += ")";
    return out;
  }

  // --- conditions (compound BSQs) ---

  CompoundBsq parse_cond() {
    if (at_ident("forall") || at_ident("exists")) return parse_cond_quant();
    CompoundBsq first = parse_cond_conj();
    if (!at_ident("or")) return first;
    // pure disjunction: every or-operand must be a single atom
    CompoundBsq out;
    out.conn = CompoundBsq::Conn::Or;
    auto take = [&](CompoundBsq c) {
      if (c.atoms.size() != 1)
        fail(peek(), "a compound query must be a pure conjunction or disjunction");
      out.atoms.push_back(std::move(c.atoms[0]));
    };
    take(std::move(first));
    while (at_ident("or")) {
      ++pos_;
      take(parse_cond_conj());
    }
    return out;
  }

  CompoundBsq parse_cond_conj() {
    CompoundBsq out;
    out.conn = CompoundBsq::Conn::And;
    out.atoms.push_back(parse_bsq_atom());
    while (at_ident("and")) {
      ++pos_;
      out.atoms.push_back(parse_bsq_atom());
    }
    return out;
  }

  CompoundBsq parse_cond_quant() {
    bool is_forall = at_ident("forall");
    ++pos_;
    std::vector<std::pair<std::string, const Sort*>> binders;
    while (true) {
      std::string var = expect_name();
      expect_ident("in");
      const Token& st = get();
      const Sort* sort = st.kind == Token::Kind::Ident ? model_.vocab.find_sort(st.text) : nullptr;
      if (!sort) fail(st, "unknown sort");
      binders.emplace_back(var, sort);
      if (at_punct(",")) {
        ++pos_;
        continue;
      }
      break;
    }
    expect_punct(":");
    std::size_t body = pos_;

    CompoundBsq out;
    out.conn = is_forall ? CompoundBsq::Conn::And : CompoundBsq::Conn::Or;
    std::vector<std::size_t> idx(binders.size(), 0);
    while (true) {
      pos_ = body;
      for (std::size_t i = 0; i < binders.size(); ++i)
        env_[binders[i].first] = {binders[i].second->constants[idx[i]],
                                  static_cast<int>(idx[i])};
      CompoundBsq inst = parse_cond();
      bool mergeable = inst.atoms.size() == 1 || inst.conn == out.conn;
      if (!mergeable)
        fail(peek(), "quantified condition mixes conjunction and disjunction");
      for (auto& a : inst.atoms) out.atoms.push_back(std::move(a));
      // advance the binder odometer
      std::size_t d = binders.size();
      while (d > 0) {
        if (++idx[d - 1] < binders[d - 1].second->constants.size()) break;
        idx[d - 1] = 0;
        --d;
      }
      if (d == 0) break;
    }
    for (auto& [var, sort] : binders) env_.erase(var);
    return out;
  }

  Bsq parse_bsq_atom() {
    expect_ident("P");
    expect_punct("[");
    Formula phi = parse_formula();
    expect_punct("]");
    const Token& op_tok = get();
    if (op_tok.kind != Token::Kind::Punct) fail(op_tok, "expected comparison operator");
    Bsq atom;
    if (op_tok.text == "==") {
      const Token& one = get();
      if (one.kind != Token::Kind::Number || one.number != 1.0)
        fail(one, "only the 'P[...] == 1' fully-observable form is supported");
      atom.kind = Bsq::Kind::Observable;
      atom.phi = std::move(phi);
      validate_formula(atom.phi, model_.vocab, *space_, /*allow_params=*/true,
                       /*observable_only=*/true);
      return atom;
    }
    CmpOp op;
    if (op_tok.text == ">")
      op = CmpOp::Gt;
    else if (op_tok.text == ">=")
      op = CmpOp::Ge;
    else if (op_tok.text == "<")
      op = CmpOp::Lt;
    else if (op_tok.text == "<=")
      op = CmpOp::Le;
    else
      fail(op_tok, "expected one of > >= < <= ==");

    atom.kind = Bsq::Kind::ProbThreshold;
    atom.phi = std::move(phi);
    atom.op = op;
    validate_formula(atom.phi, model_.vocab, *space_, /*allow_params=*/false,
                     /*observable_only=*/false);
    const Token& rhs = peek();
    if (rhs.kind == Token::Kind::Number || at_punct("-")) {
      atom.literal = expect_number();
    } else if (rhs.kind == Token::Kind::Ident) {
      auto it = param_index_.find(rhs.text);
      if (it == param_index_.end())
        fail(rhs, "parameter '" + rhs.text + "' has no declared domain");
      atom.param = it->second;
      ++pos_;
    } else {
      fail(rhs, "expected parameter or literal threshold");
    }
    return atom;
  }

  // --- formulas ---

  Formula parse_formula() {
    if (at_ident("forall") || at_ident("exists")) return parse_formula_quant();
    Formula first = parse_formula_conj();
    if (!at_ident("or")) return first;
    std::vector<Formula> parts{std::move(first)};
    while (at_ident("or")) {
      ++pos_;
      parts.push_back(parse_formula_conj());
    }
    return Formula::disj(std::move(parts));
  }

  Formula parse_formula_conj() {
    Formula first = parse_formula_unit();
    if (!at_ident("and")) return first;
    std::vector<Formula> parts{std::move(first)};
    while (at_ident("and")) {
      ++pos_;
      parts.push_back(parse_formula_unit());
    }
    return Formula::conj(std::move(parts));
  }

  Formula parse_formula_quant() {
    bool is_forall = at_ident("forall");
    ++pos_;
    std::vector<std::pair<std::string, const Sort*>> binders;
    while (true) {
      std::string var = expect_name();
      expect_ident("in");
      const Token& st = get();
      const Sort* sort = st.kind == Token::Kind::Ident ? model_.vocab.find_sort(st.text) : nullptr;
      if (!sort) fail(st, "unknown sort");
      binders.emplace_back(var, sort);
      if (at_punct(",")) {
        ++pos_;
        continue;
      }
      break;
    }
    expect_punct(":");
    std::size_t body = pos_;
    std::vector<Formula> parts;
    std::vector<std::size_t> idx(binders.size(), 0);
    while (true) {
      pos_ = body;
      for (std::size_t i = 0; i < binders.size(); ++i)
        env_[binders[i].first] = {binders[i].second->constants[idx[i]],
                                  static_cast<int>(idx[i])};
      parts.push_back(parse_formula_unit());
      std::size_t d = binders.size();
      while (d > 0) {
        if (++idx[d - 1] < binders[d - 1].second->constants.size()) break;
        idx[d - 1] = 0;
        --d;
      }
      if (d == 0) break;
    }
    for (auto& [var, sort] : binders) env_.erase(var);
    return is_forall ? Formula::conj(std::move(parts)) : Formula::disj(std::move(parts));
  }

  Formula parse_formula_unit() {
    if (at_ident("not")) {
      ++pos_;
      return Formula::negate(parse_formula_unit());
    }
    if (at_punct("(")) {
      ++pos_;
      Formula f = parse_formula();
      expect_punct(")");
      return f;
    }
    if (at_ident("true")) {
      ++pos_;
      return Formula::truth();
    }
    Term lhs = parse_term();
    if (peek().kind == Token::Kind::Punct) {
      const std::string& p = peek().text;
      CmpOp op;
      bool is_cmp = true;
      if (p == "==")
        op = CmpOp::Eq;
      else if (p == "!=")
        op = CmpOp::Ne;
      else if (p == "<")
        op = CmpOp::Lt;
      else if (p == "<=")
        op = CmpOp::Le;
      else if (p == ">")
        op = CmpOp::Gt;
      else if (p == ">=")
        op = CmpOp::Ge;
      else
        is_cmp = false;
      if (is_cmp) {
        ++pos_;
        Term rhs = parse_term();
        return Formula::cmp(std::move(lhs), op, std::move(rhs));
      }
    }
    // bare boolean atom
    if (lhs.kind != Term::Kind::Var && lhs.kind != Term::Kind::Static)
      fail(peek(), "expected comparison");
    return Formula::cmp(std::move(lhs), CmpOp::Ne, Term::literal(0));
  }

  Term parse_term() {
    Term t = parse_primary();
    while (at_punct("+") || at_punct("-")) {
      bool add = peek().text == "+";
      ++pos_;
      t = Term::binary(add ? Term::Kind::Add : Term::Kind::Sub, std::move(t), parse_primary());
    }
    return t;
  }

  Term parse_primary() {
    if (at_punct("-")) {
      ++pos_;
      return Term::unary(Term::Kind::Neg, parse_primary());
    }
    if (at_punct("(")) {
      ++pos_;
      Term t = parse_term();
      expect_punct(")");
      return t;
    }
    if (at_ident("abs")) {
      ++pos_;
      expect_punct("(");
      Term t = parse_term();
      expect_punct(")");
      return Term::unary(Term::Kind::Abs, std::move(t));
    }
    const Token& t = get();
    if (t.kind == Token::Kind::Number) {
      if (!t.is_integer) fail(t, "formula literals must be integers");
      return Term::literal(static_cast<long long>(t.number));
    }
    if (t.kind != Token::Kind::Ident) fail(t, "expected term");

    if (!at_punct("(")) {
      // bare identifier: loop binding, then parameter
      auto env_it = env_.find(t.text);
      if (env_it != env_.end()) return Term::literal(env_it->second.code);
      auto par_it = param_index_.find(t.text);
      if (par_it != param_index_.end()) return Term::param(par_it->second);
      fail(t, "unknown symbol '" + t.text + "'");
    }

    // application: static function or grounded state variable
    int static_idx = model_.vocab.static_index(t.text);
    if (static_idx >= 0) {
      ++pos_;  // '('
      std::vector<Term> args;
      while (!at_punct(")")) {
        if (!args.empty()) expect_punct(",");
        args.push_back(parse_static_arg());
      }
      ++pos_;
      return Term::static_app(static_idx, std::move(args));
    }

    std::string name = t.text + "(";
    ++pos_;  // '('
    bool first = true;
    while (!at_punct(")")) {
      if (!first) {
        expect_punct(",");
        name += ",";
      }
      first = false;
      const Token& arg = get();
      if (arg.kind == Token::Kind::Ident) {
        auto it = env_.find(arg.text);
        name += (it != env_.end()) ? it->second.constant : arg.text;
      } else if (arg.kind == Token::Kind::Number && arg.is_integer) {
        name += arg.text;
      } else {
        fail(arg, "bad variable argument");
      }
    }
    ++pos_;
    name += ")";
    int var_idx = model_.vocab.var_index(name);
    if (var_idx < 0) fail(t, "unknown symbol '" + name + "'");
    return Term::var(var_idx);
  }

  // Static arguments are integer terms; sort constants resolve to their codes.
  Term parse_static_arg() {
    if (peek().kind == Token::Kind::Ident && !at_punct("(")) {
      const std::string& s = peek().text;
      auto it = env_.find(s);
      if (it != env_.end()) {
        ++pos_;
        return Term::literal(it->second.code);
      }
      for (const auto& sort : model_.vocab.sorts) {
        int code = sort.code_of(s);
        if (code >= 0) {
          ++pos_;
          return Term::literal(code);
        }
      }
    }
    return parse_term();
  }

  Lexer lex_;
  const GPomdp& model_;
  const std::vector<Token>* toks_;
  std::size_t pos_ = 0;
  BsqPreference pref_;
  ParamSpacePtr space_;
  std::map<std::string, int> param_index_;
  std::map<std::string, Binding> env_;
};

}  // namespace

BsqPreference parse_preference(const std::string& text, const GPomdp& model) {
  Parser parser(text, model);
  BsqPreference pref = parser.parse();
  // resolve and validate actions
  for (auto& r : pref.rules) {
    r.action = model.action_index(r.action_name);
    if (r.action < 0) throw ParseError(1, 1, "unknown action '" + r.action_name + "'");
  }
  for (std::size_t i = 0; i + 1 < pref.rules.size(); ++i)
    if (!pref.rules[i].condition.has_value())
      throw ParseError(1, 1, "only the terminal rule may be a catchall");
  if (pref.rules.empty() || pref.rules.back().condition.has_value())
    throw ParseError(1, 1, "preference must end with a terminal else rule");
  return pref;
}

}  // namespace bsq
