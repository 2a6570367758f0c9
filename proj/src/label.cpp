#include <algorithm>

#include "bigsos/behaviour.hpp"
#include "bigsos/label.hpp"

namespace bigsos {

std::string to_string(const Label& l) { return l.is_nat() ? std::to_string(l.nat()) : l.symbol(); }

bool LabelSet::contains(const Label& l) const {
  if (naturals && l.is_nat()) return true;
  return std::find(finite.begin(), finite.end(), l) != finite.end();
}

std::string to_string(Functor f) {
  switch (f) {
    case Functor::Stream: return "stream";
    case Functor::Lts: return "lts";
    case Functor::Weighted: return "wts";
  }
  return "?";
}

}  // namespace bigsos
