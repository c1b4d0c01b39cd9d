#include "msim/manifest.hpp"

#include <stdexcept>

#include "msim/util.hpp"

namespace msim {

Json Manifest::to_json() const {
    Json j;
    j["kind"] = kind;
    j["schema"] = schema;
    j["tool_version"] = kToolVersion;
    j["params"] = params;
    j["inputs"] = inputs;
    return j;
}

Manifest Manifest::from_json(const Json& j) {
    if (!j.is_object() || !j.contains("kind") || !j.contains("params"))
        throw std::runtime_error("malformed manifest");
    Manifest m;
    m.kind = j.at("kind").get<std::string>();
    m.schema = j.value("schema", "1");
    m.params = j.at("params");
    m.inputs = j.value("inputs", Json::object());
    return m;
}

std::string Manifest::hash() const {
    return hex64(fnv1a64(to_json().dump()));
}

std::string Manifest::short_hash() const { return hash().substr(0, 8); }

}  // namespace msim
