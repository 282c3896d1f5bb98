#include "heis/group.hpp"

#include <string>

#include "heis/error.hpp"

namespace heis {

MetricParam::MetricParam(double L) : L_(L) {
    if (!(L > 0.0) || !std::isfinite(L)) throw InputError("metric parameter L must be positive and finite, got " + std::to_string(L));
}

}  // namespace heis
