#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "arcloom/series.hpp"

namespace arcloom {

// Identifier table for the expression grammar.  `names` is aligned with the
// context's variables; `aliases` admits alternate spellings (e.g. plain "x"
// for "x1").  The literal "e" is reserved for the nilpotent and is never a
// variable name.
struct NameTable {
  std::vector<std::string> names;
  std::map<std::string, unsigned> aliases;

  std::optional<unsigned> find(const std::string& id) const;

  // x1..xn with conventional aliases (x, y, z for the first three; t when
  // univariate).
  static NameTable space(unsigned n);
  // Ambient block x1..xn followed by input block y1..ym; aliases x -> x1 and
  // y -> y1.
  static NameTable ambient_inputs(unsigned n, unsigned m);
  // Single arc parameter t.
  static NameTable arc();
};

// Expression grammar: rationals p/q, variables from the name table, the
// nilpotent e, operators + - * ^ and parentheses.  Expressions denote
// polynomials: the result has infinite validity.
Series parse_series_expr(const std::string& text, const CtxPtr& ctx, const NameTable& names);
Series parse_series_expr(const std::string& text, const CtxPtr& ctx);

// Constant expression (no variables; e allowed when the ring has one).
RElem parse_const_relem(const std::string& text, const Ring& ring);

Ring parse_ring_spec(const std::string& text);                               // Q | Q[e]/e^N
std::vector<Rat> parse_weight_list(const std::string& text, unsigned nvars); // w1,..,wn

// Series/tuple file format:
//   nvars=<n> L=<w1,..,wn> validity=<T|inf> ring=<spec>
//   <a1,..,an>[,<comp>]: <coefficient>
// Component indices are 1-based; lines without one belong to component 1.
// '#' starts a comment; blank lines are ignored.
void write_series_file(std::ostream& os, const SeriesVec& v);
SeriesVec read_series_file(std::istream& is);

// Jet file: `level=<e>` then one comma-separated coefficient list per
// component (coefficients of t^0..t^level; shorter lines are zero-padded).
struct JetFileData {
  unsigned level = 0;
  std::vector<std::vector<RElem>> comps;
};
void write_jet_file(std::ostream& os, const JetFileData& jet);
JetFileData read_jet_file(std::istream& is, const Ring& ring);

// Matrix of series: one row per line, entries comma-separated expressions.
std::vector<std::vector<Series>> read_series_matrix(std::istream& is, const CtxPtr& ctx,
                                                    const NameTable& names);
// Inline form: rows separated by ';'.
std::vector<std::vector<Series>> parse_series_matrix(const std::string& text, const CtxPtr& ctx,
                                                     const NameTable& names);

std::vector<std::string> split(const std::string& text, char sep);
std::string strip(const std::string& text);
// Strips comments/blank lines; returns remaining lines.
std::vector<std::string> read_content_lines(std::istream& is);

}  // namespace arcloom
