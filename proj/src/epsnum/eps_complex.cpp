#include "paraqk/epsnum/eps_complex.hpp"

#include <ostream>

namespace paraqk {

std::ostream& operator<<(std::ostream& os, const EpsComplex& a) {
  os << a.re << (a.im < 0 ? " - " : " + ") << std::abs(a.im);
  return os << (a.eps > 0 ? "e" : "i");
}

}  // namespace paraqk
