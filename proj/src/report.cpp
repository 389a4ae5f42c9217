#include "conman/report.hpp"

#include <algorithm>

namespace conman {

std::string Violation::to_string() const
{
    std::string out = code;
    if (!subject.empty())
        out += " '" + subject + "'";
    if (!detail.empty())
        out += ": " + detail;
    return out;
}

void ValidationReport::add(std::string code, std::string subject, std::string detail)
{
    items_.push_back({std::move(code), std::move(subject), std::move(detail)});
}

void ValidationReport::append(const ValidationReport& other, const std::string& prefix)
{
    for (const auto& v : other.items_) {
        Violation copy = v;
        if (!prefix.empty())
            copy.detail = copy.detail.empty() ? prefix : prefix + ": " + copy.detail;
        items_.push_back(std::move(copy));
    }
}

std::size_t ValidationReport::count(const std::string& code) const
{
    return static_cast<std::size_t>(std::count_if(items_.begin(), items_.end(),
        [&](const Violation& v) { return v.code == code; }));
}

} // namespace conman
