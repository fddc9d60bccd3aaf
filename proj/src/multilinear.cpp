#include "qssep/multilinear.hpp"

namespace qssep {

template class MultilinearPoly<BigInt>;

}  // namespace qssep
