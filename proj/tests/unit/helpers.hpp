#pragma once

#include <string>

#include "tgr/term.hpp"
#include "tgr/workspace.hpp"

namespace tgr::test {

/// Every operator the examples use.
inline const Signature& sig() {
  static const Signature s = [] {
    Signature s;
    for (auto [n, a] : {std::pair<const char*, int>{"f", 1}, {"g", 1}, {"h", 2}, {"I", 1},
                        {"k", 2}, {"r", 1}, {"d", 1}, {"p", 2}, {"cdr", 1}, {"cons", 2},
                        {"a", 0}, {"b", 0}, {"c", 0}})
      s.add(n, a);
    return s;
  }();
  return s;
}

inline Term T(const std::string& text) { return parse_term(text, sig()); }

inline const std::string kSig = "sig f/1 g/1 h/2 I/1 k/2 r/1 d/1 p/2 cdr/1 cons/2 a/0 b/0 c/0\n";

/// A workspace over the shared signature.
inline Workspace W(const std::string& body) { return parse_workspace(kSig + body); }

inline const std::string kCircularF = "graph F { n: f(n); root n; }\n";
inline const std::string kCircularG = "graph Gg { n: g(n); root n; }\n";
inline const std::string kCircularI = "graph CI { n: I(n); root n; }\n";
inline const std::string kG0 =
    "graph G0 { o: cdr(c); c: cons(fa, d); fa: f(a); a: a; d: cdr(c); root o; }\n";
inline const std::string kShared = "graph Shared { k: k(fn, rn); rn: r(fn); fn: f(an); an: a; root k; }\n";
inline const std::string kRf = "rule R_f: f(x) -> g(x)\n";
inline const std::string kRcdr = "rule R_cdr: cdr(cons(x, y)) -> y\n";
inline const std::string kRI = "rule R_I: I(x) -> x\n";

}  // namespace tgr::test
