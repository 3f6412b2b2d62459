#include "arcloom/io.hpp"

#include <cctype>
#include <istream>
#include <ostream>
#include <sstream>

namespace arcloom {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::string strip(const std::string& text) {
  std::size_t b = 0, e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  return text.substr(b, e - b);
}

std::vector<std::string> read_content_lines(std::istream& is) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(is, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = strip(line);
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

std::optional<unsigned> NameTable::find(const std::string& id) const {
  for (unsigned i = 0; i < names.size(); ++i)
    if (names[i] == id) return i;
  auto it = aliases.find(id);
  if (it != aliases.end()) return it->second;
  return std::nullopt;
}

NameTable NameTable::space(unsigned n) {
  NameTable t;
  for (unsigned i = 0; i < n; ++i) t.names.push_back("x" + std::to_string(i + 1));
  if (n >= 1) t.aliases["x"] = 0;
  if (n >= 2) t.aliases["y"] = 1;
  if (n >= 3) t.aliases["z"] = 2;
  if (n == 1) t.aliases["t"] = 0;
  return t;
}

NameTable NameTable::ambient_inputs(unsigned n, unsigned m) {
  NameTable t;
  for (unsigned i = 0; i < n; ++i) t.names.push_back("x" + std::to_string(i + 1));
  for (unsigned i = 0; i < m; ++i) t.names.push_back("y" + std::to_string(i + 1));
  if (n >= 1) t.aliases["x"] = 0;
  if (n == 1) t.aliases["t"] = 0;
  if (m >= 1) t.aliases["y"] = n;
  return t;
}

NameTable NameTable::arc() {
  NameTable t;
  t.names.push_back("t");
  return t;
}

namespace {

struct Token {
  enum Kind { rat, ident, plus, minus, star, caret, lparen, rparen, end } kind;
  Rat value;
  std::string text;
};

class Lexer {
public:
  explicit Lexer(const std::string& s) : s_(s) {}

  Token next() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (i_ >= s_.size()) return {Token::end, Rat(0), ""};
    char ch = s_[i_];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::string num = take_digits();
      if (i_ < s_.size() && s_[i_] == '/') {
        std::size_t save = i_;
        ++i_;
        if (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
          std::string den = take_digits();
          return {Token::rat, parse_rat(num + "/" + den), num + "/" + den};
        }
        i_ = save;
      }
      return {Token::rat, parse_rat(num), num};
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::string id;
      while (i_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_' || s_[i_] == '\''))
        id += s_[i_++];
      return {Token::ident, Rat(0), id};
    }
    ++i_;
    switch (ch) {
      case '+': return {Token::plus, Rat(0), "+"};
      case '-': return {Token::minus, Rat(0), "-"};
      case '*': return {Token::star, Rat(0), "*"};
      case '^': return {Token::caret, Rat(0), "^"};
      case '(': return {Token::lparen, Rat(0), "("};
      case ')': return {Token::rparen, Rat(0), ")"};
      default: fail(errc::parse_error, std::string("unexpected character '") + ch + "' in expression");
    }
  }

private:
  std::string take_digits() {
    std::string num;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) num += s_[i_++];
    return num;
  }

  const std::string& s_;
  std::size_t i_ = 0;
};

class Parser {
public:
  Parser(const std::string& text, CtxPtr ctx, const NameTable& names)
      : lex_(text), ctx_(std::move(ctx)), names_(names) {
    advance();
  }

  Series parse() {
    Series r = expr();
    if (tok_.kind != Token::end) fail(errc::parse_error, "trailing input after expression");
    return r;
  }

private:
  void advance() { tok_ = lex_.next(); }

  Series expr() {
    Series r = term();
    while (tok_.kind == Token::plus || tok_.kind == Token::minus) {
      bool minus = tok_.kind == Token::minus;
      advance();
      Series t = term();
      r = minus ? sub(r, t) : add(r, t);
    }
    return r;
  }

  Series term() {
    Series r = unary();
    while (tok_.kind == Token::star) {
      advance();
      r = mul(r, unary());
    }
    return r;
  }

  Series unary() {
    if (tok_.kind == Token::minus) {
      advance();
      return neg(unary());
    }
    if (tok_.kind == Token::plus) {
      advance();
      return unary();
    }
    return power();
  }

  Series power() {
    Series base = atom();
    if (tok_.kind == Token::caret) {
      advance();
      if (tok_.kind != Token::rat || tok_.value.get_den() != 1 || tok_.value < 0)
        fail(errc::parse_error, "exponent must be a natural number");
      unsigned long k = tok_.value.get_num().get_ui();
      advance();
      base = pow_nat(base, k, ExtRat::infinity());
    }
    return base;
  }

  Series atom() {
    switch (tok_.kind) {
      case Token::rat: {
        Series s = series_const(ctx_, tok_.value);
        advance();
        return s;
      }
      case Token::ident: {
        std::string id = tok_.text;
        advance();
        if (id == "e") {
          if (ctx_->ring.is_field())
            fail(errc::parse_error, "nilpotent 'e' is not available over Q");
          return series_const(ctx_, RElem::eps(1));
        }
        if (auto idx = names_.find(id)) return series_variable(ctx_, *idx);
        fail(errc::parse_error, "unknown identifier '" + id + "'");
      }
      case Token::lparen: {
        advance();
        Series s = expr();
        if (tok_.kind != Token::rparen) fail(errc::parse_error, "missing ')'");
        advance();
        return s;
      }
      default:
        fail(errc::parse_error, "unexpected token '" + tok_.text + "'");
    }
  }

  Lexer lex_;
  Token tok_;
  CtxPtr ctx_;
  const NameTable& names_;
};

}  // namespace

Series parse_series_expr(const std::string& text, const CtxPtr& ctx, const NameTable& names) {
  return Parser(text, ctx, names).parse();
}

Series parse_series_expr(const std::string& text, const CtxPtr& ctx) {
  NameTable names;
  names.names = default_names(*ctx);
  if (ctx->nvars >= 1) names.aliases["x"] = 0;
  if (ctx->nvars >= 2) names.aliases["y"] = 1;
  if (ctx->nvars >= 3) names.aliases["z"] = 2;
  return parse_series_expr(text, ctx, names);
}

RElem parse_const_relem(const std::string& text, const Ring& ring) {
  CtxPtr ctx = make_context(0, {}, ring);
  Series s = parse_series_expr(text, ctx, NameTable{});
  return s.coeff(Exp{});
}

Ring parse_ring_spec(const std::string& text) {
  std::string t = strip(text);
  if (t == "Q") return Ring{1};
  const std::string prefix = "Q[e]/e^";
  if (t.rfind(prefix, 0) == 0) {
    std::string n = t.substr(prefix.size());
    Rat r = parse_rat(n);
    if (r.get_den() != 1 || r < 2) fail(errc::parse_error, "nil index must be an integer >= 2");
    return Ring{static_cast<unsigned>(r.get_num().get_ui())};
  }
  fail(errc::parse_error, "bad ring spec '" + text + "' (expected Q or Q[e]/e^N)");
}

std::vector<Rat> parse_weight_list(const std::string& text, unsigned nvars) {
  std::vector<Rat> L;
  for (const std::string& part : split(text, ',')) L.push_back(parse_rat(strip(part)));
  if (L.size() != nvars)
    fail(errc::parse_error, "expected " + std::to_string(nvars) + " weights, got " +
                                std::to_string(L.size()));
  return L;
}

void write_series_file(std::ostream& os, const SeriesVec& v) {
  require_internal(v.size() > 0, "write_series_file of empty tuple");
  const Context& ctx = *v.ctx();
  os << "nvars=" << ctx.nvars << " L=";
  for (unsigned i = 0; i < ctx.nvars; ++i) {
    if (i) os << ",";
    os << rat_str(ctx.L[i]);
  }
  os << " validity=" << v.validity().str() << " ring=" << ctx.ring.str() << "\n";
  for (unsigned comp = 0; comp < v.size(); ++comp) {
    for (const auto& [k, val] : v[comp].c) {
      for (unsigned i = 0; i < k.a.size(); ++i) {
        if (i) os << ",";
        os << k.a[i];
      }
      if (v.size() > 1) os << "," << (comp + 1);
      os << ": " << relem_str(val) << "\n";
    }
  }
}

SeriesVec read_series_file(std::istream& is) {
  std::vector<std::string> lines = read_content_lines(is);
  if (lines.empty()) fail(errc::parse_error, "empty series file");
  unsigned nvars = 0;
  std::string lspec, vspec = "inf", rspec = "Q";
  bool have_n = false;
  for (const std::string& field : split(lines[0], ' ')) {
    std::string f = strip(field);
    if (f.empty()) continue;
    auto eq = f.find('=');
    if (eq == std::string::npos) fail(errc::parse_error, "bad header field '" + f + "'");
    std::string key = f.substr(0, eq), val = f.substr(eq + 1);
    if (key == "nvars") {
      Rat r = parse_rat(val);
      if (r.get_den() != 1 || r < 1) fail(errc::parse_error, "bad nvars");
      nvars = static_cast<unsigned>(r.get_num().get_ui());
      have_n = true;
    } else if (key == "L") {
      lspec = val;
    } else if (key == "validity") {
      vspec = val;
    } else if (key == "ring") {
      rspec = val;
    } else {
      fail(errc::parse_error, "unknown header field '" + key + "'");
    }
  }
  if (!have_n) fail(errc::parse_error, "series file header lacks nvars");
  Ring ring = parse_ring_spec(rspec);
  std::vector<Rat> L = lspec.empty() ? std::vector<Rat>(nvars, Rat(1)) : parse_weight_list(lspec, nvars);
  CtxPtr ctx = make_context(nvars, L, ring);
  ExtRat validity = parse_extrat(vspec);

  struct Entry {
    Exp a;
    unsigned comp;
    RElem v;
  };
  std::vector<Entry> entries;
  unsigned ncomp = 1;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    auto colon = lines[li].find(':');
    if (colon == std::string::npos) fail(errc::parse_error, "missing ':' in '" + lines[li] + "'");
    std::vector<std::string> idx = split(lines[li].substr(0, colon), ',');
    if (idx.size() != nvars && idx.size() != nvars + 1)
      fail(errc::parse_error, "bad exponent arity in '" + lines[li] + "'");
    Exp a(nvars);
    for (unsigned i = 0; i < nvars; ++i) {
      Rat r = parse_rat(strip(idx[i]));
      if (r.get_den() != 1 || r < 0) fail(errc::parse_error, "bad exponent in '" + lines[li] + "'");
      a[i] = static_cast<unsigned>(r.get_num().get_ui());
    }
    unsigned comp = 1;
    if (idx.size() == nvars + 1) {
      Rat r = parse_rat(strip(idx[nvars]));
      if (r.get_den() != 1 || r < 1) fail(errc::parse_error, "bad component in '" + lines[li] + "'");
      comp = static_cast<unsigned>(r.get_num().get_ui());
    }
    ncomp = std::max(ncomp, comp);
    entries.push_back({std::move(a), comp, parse_const_relem(strip(lines[li].substr(colon + 1)), ring)});
  }
  SeriesVec out = vec_zero(ctx, ncomp, validity);
  for (const Entry& e : entries) out[e.comp - 1].add_coeff(e.a, e.v);
  return out;
}

void write_jet_file(std::ostream& os, const JetFileData& jet) {
  os << "level=" << jet.level << "\n";
  for (const auto& comp : jet.comps) {
    for (std::size_t i = 0; i <= jet.level; ++i) {
      if (i) os << ",";
      os << (i < comp.size() ? relem_str(comp[i]) : "0");
    }
    os << "\n";
  }
}

JetFileData read_jet_file(std::istream& is, const Ring& ring) {
  std::vector<std::string> lines = read_content_lines(is);
  if (lines.empty()) fail(errc::parse_error, "empty jet file");
  const std::string prefix = "level=";
  if (lines[0].rfind(prefix, 0) != 0) fail(errc::parse_error, "jet file must start with level=<e>");
  Rat lv = parse_rat(strip(lines[0].substr(prefix.size())));
  if (lv.get_den() != 1 || lv < 0) fail(errc::parse_error, "bad jet level");
  JetFileData jet;
  jet.level = static_cast<unsigned>(lv.get_num().get_ui());
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::vector<RElem> comp;
    for (const std::string& part : split(lines[i], ','))
      comp.push_back(parse_const_relem(strip(part), ring));
    jet.comps.push_back(std::move(comp));
  }
  if (jet.comps.empty()) fail(errc::parse_error, "jet file has no components");
  return jet;
}

std::vector<std::vector<Series>> read_series_matrix(std::istream& is, const CtxPtr& ctx,
                                                    const NameTable& names) {
  std::vector<std::vector<Series>> rows;
  for (const std::string& line : read_content_lines(is)) {
    std::vector<Series> row;
    for (const std::string& part : split(line, ','))
      row.push_back(parse_series_expr(strip(part), ctx, names));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(errc::parse_error, "empty matrix file");
  for (const auto& row : rows)
    if (row.size() != rows[0].size()) fail(errc::parse_error, "ragged matrix rows");
  return rows;
}

std::vector<std::vector<Series>> parse_series_matrix(const std::string& text, const CtxPtr& ctx,
                                                     const NameTable& names) {
  std::stringstream ss;
  for (const std::string& row : split(text, ';')) ss << row << "\n";
  return read_series_matrix(ss, ctx, names);
}

}  // namespace arcloom
