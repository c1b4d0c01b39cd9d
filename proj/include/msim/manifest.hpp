#pragma once

#include <map>
#include <string>

#include <json.hpp>

namespace msim {

using Json = nlohmann::json;

// tool version embedded in every artifact
inline constexpr const char* kToolVersion = "1.0.0";

// ---------------------------------------------------------------------------
// provenance manifests
//
// Every persisted artifact embeds a manifest describing exactly how it was
// produced: what kind of artifact it is, the parameters of the command that
// made it, and the manifest hashes of the inputs it consumed.  Two artifacts
// with the same manifest are byte-identical by construction (no timestamps,
// no environment state), so the hash doubles as a reproducibility check and
// a provenance chain.

struct Manifest {
    std::string kind;     // "run_log", "dataset", "model", "report", ...
    std::string schema = "1";
    Json params = Json::object();
    Json inputs = Json::object();  // name -> manifest hash of the input

    Json to_json() const;
    static Manifest from_json(const Json& j);

    // FNV-1a over the canonical serialization (sorted keys, no whitespace)
    std::string hash() const;
    // first eight hex digits, used as the artifact filename prefix
    std::string short_hash() const;
};

}  // namespace msim
