#ifndef QZSG_SERIALIZE_HPP
#define QZSG_SERIALIZE_HPP

#include <json.hpp>

#include "qzsg/matrix.hpp"

namespace qzsg {

/// Array of rows, each entry a two-element array [re, im].
nlohmann::json matrix_to_json(const ComplexMatrix& m);
/// Throws ValidationError on a ragged, non-square or malformed array.
ComplexMatrix matrix_from_json(const nlohmann::json& j);

}  // namespace qzsg

#endif  // QZSG_SERIALIZE_HPP
