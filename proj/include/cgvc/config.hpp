#pragma once

#include <map>
#include <string>

namespace cgvc {

// Flat key-value config with [section] headers; keys are stored as
// "section.key". '#' starts a comment.
class Config {
  public:
    static Config from_file(const std::string& path);
    static Config from_string(const std::string& text);

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    std::string get(const std::string& key, const std::string& fallback = "") const {
        auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

  private:
    std::map<std::string, std::string> values_;
};

}  // namespace cgvc
