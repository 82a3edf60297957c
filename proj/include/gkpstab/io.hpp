#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "gkpstab/bounds.hpp"
#include "gkpstab/decode.hpp"
#include "gkpstab/optimize.hpp"
#include "gkpstab/reduction.hpp"

namespace gkpstab {

using Json = nlohmann::json;

// 12 significant digits, '.' decimal separator.
std::string format_sig(double x);

// Prepends a constant format_version column (currently 1) to header and rows.
void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

Json to_json(const Mat& m);
Mat mat_from_json(const Json& j);

Json to_json(const DecodeReport& rep);
Json to_json(const ReductionResult& res);
Json to_json(const BoundsReport& rep);
Json to_json(const OptResult& res);
Json to_json(const EntropyReport& rep);

ReductionResult reduction_from_json(const Json& j);

// Throws ConfigError on missing file or malformed JSON.
Json load_json(const std::string& path);
void save_json(const std::string& path, const Json& j);

// Throws ConfigError naming the first key outside `allowed`.
void reject_unknown_keys(const Json& obj,
                         const std::vector<std::string>& allowed,
                         const std::string& context);

// Built-in lattice labels: square, hexagonal, hexagonal-pair, d4, bell,
// rectangular:<eta>.
// `modes` selects the mode count where the label is ambiguous; labels with a
// fixed mode count reject a mismatching request.
Lattice lattice_from_spec(const std::string& label, int modes);

}  // namespace gkpstab
