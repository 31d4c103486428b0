#include "responsum/polynomial.hpp"

#include <sstream>

namespace responsum {

CPolynomial conjugate(const CPolynomial& p) {
  CPolynomial out(p.nvars());
  for (const auto& [e, c] : p.terms()) out.add_term(e, std::conj(c));
  return out;
}

CPolynomial to_complex(const Polynomial& p) {
  CPolynomial out(p.nvars());
  for (const auto& [e, c] : p.terms()) out.add_term(e, cplx(c, 0.0));
  return out;
}

std::string to_string(const Polynomial& p) {
  if (p.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : p.terms()) {
    if (!first) os << " + ";
    first = false;
    os << c;
    for (int j = 0; j < p.nvars(); ++j) {
      if (e[j] == 0) continue;
      os << " x" << (j + 1);
      if (e[j] > 1) os << "^" << e[j];
    }
  }
  return os.str();
}

}  // namespace responsum
