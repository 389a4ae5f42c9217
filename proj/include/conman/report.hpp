#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace conman {

/// One violated invariant. `code` is a stable kebab-case tag (e.g.
/// "dangling-target"), `subject` names the offending identifier.
struct Violation {
    std::string code;
    std::string subject;
    std::string detail;

    std::string to_string() const;
    friend bool operator==(const Violation&, const Violation&) = default;
};

class ValidationReport {
public:
    void add(std::string code, std::string subject, std::string detail = {});
    void append(const ValidationReport& other, const std::string& prefix = {});

    bool ok() const { return items_.empty(); }
    std::size_t size() const { return items_.size(); }
    std::size_t count(const std::string& code) const;
    bool has(const std::string& code) const { return count(code) > 0; }

    const std::vector<Violation>& items() const { return items_; }
    auto begin() const { return items_.begin(); }
    auto end() const { return items_.end(); }

private:
    std::vector<Violation> items_;
};

} // namespace conman
