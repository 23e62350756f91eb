#pragma once

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <string>

#include "json.hpp"
#include "ocrloop/errors.hpp"

namespace ocrloop {

// OCRLOOP_ prefix plus the option key upper-cased, dashes to
// underscores: "base-url" -> OCRLOOP_BASE_URL.
inline std::string env_var_name(const std::string& key) {
    std::string name = "OCRLOOP_";
    for (char c : key)
        name += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return name;
}

inline nlohmann::json load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) throw ConfigError("cannot read config file: " + path);
    nlohmann::json parsed = nlohmann::json::parse(in, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object())
        throw ConfigError("config file is not a JSON object: " + path);
    return parsed;
}

// Merges the three option sources under the fixed precedence
// flag > environment > config file > built-in default. The environment
// getter is injectable so precedence stays testable without mutating
// the process environment.
class ConfigResolver {
  public:
    using EnvGetter = std::function<std::optional<std::string>(const std::string&)>;

    explicit ConfigResolver(nlohmann::json file_values = nlohmann::json::object(),
                            EnvGetter env = default_env())
        : file_(std::move(file_values)), env_(std::move(env)) {}

    std::string resolve(const std::string& key, const std::optional<std::string>& flag,
                        const std::string& default_value) const {
        if (flag) return *flag;
        if (const auto env_value = env_(env_var_name(key))) return *env_value;
        if (file_.contains(key)) {
            const auto& v = file_.at(key);
            if (v.is_string()) return v.get<std::string>();
            return v.dump();  // numbers and booleans read as their literal text
        }
        return default_value;
    }

    static EnvGetter default_env() {
        return [](const std::string& name) -> std::optional<std::string> {
            const char* v = std::getenv(name.c_str());
            if (!v) return std::nullopt;
            return std::string(v);
        };
    }

  private:
    nlohmann::json file_;
    EnvGetter env_;
};

}  // namespace ocrloop
