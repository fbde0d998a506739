#include "mburqr/studies.hpp"

#include "mburqr/errors.hpp"

namespace mburqr {

const std::vector<Study>& studies() {
    static const std::vector<Study> all{
        {"education", "education", {"employment", "air", "life_satisfaction", "homicide"}},
        {"water", "water", {"employment", "air", "life_expectancy", "life_satisfaction", "homicide"}},
        {"support", "support", {"air", "life_expectancy", "homicide"}},
        {"safety", "safety", {"employment", "air"}},
    };
    return all;
}

std::string study_names() {
    std::string out;
    for (const auto& s : studies()) out += (out.empty() ? "" : ", ") + s.name;
    return out;
}

const Study& find_study(std::string_view name) {
    for (const auto& s : studies())
        if (s.name == name) return s;
    throw NameError("unknown study '" + std::string(name) + "' (valid: " + study_names() + ")");
}

}  // namespace mburqr
