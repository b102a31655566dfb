#pragma once

#include "prefopt/engine.hpp"

#include <json.hpp>

#include <filesystem>

namespace prefopt {

using Json = nlohmann::json;

inline constexpr const char* kSessionFormat = "prefopt-session";
inline constexpr int kSessionVersion = 1;

Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j);
Json matrix_to_json(const Matrix& m);  ///< array of rows
Matrix matrix_from_json(const Json& j, Eigen::Index cols_if_empty = 0);

Json to_json(const BoxBounds& b);
BoxBounds bounds_from_json(const Json& j);
Json to_json(const LinearConstraints& lin);
LinearConstraints linear_from_json(const Json& j, std::size_t n);
Json to_json(const PreferenceRecord& p);
PreferenceRecord preference_record_from_json(const Json& j);
Json to_json(const QueryPair& q);
Json to_json(const RBFSurrogate& s);
RBFSurrogate surrogate_from_json(const Json& j);

Json to_json(const EngineConfig& cfg);
/// Missing keys keep the values already in base.
EngineConfig config_from_json(const Json& j, EngineConfig base = {});

struct SessionCodec {
    static Json encode(const Session& s);
    /// Callbacks are not serializable; pass them again when the problem needs them.
    static Session decode(const Json& j, NonlinearConstraint nonlinear = {}, PayloadFunction payload = {});
};

/// Writes to a temporary sibling and renames it over path.
void write_json_atomic(const std::filesystem::path& path, const Json& j);
Json read_json_file(const std::filesystem::path& path);

}  // namespace prefopt
