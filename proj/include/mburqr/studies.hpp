#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mburqr {

struct Study {
    std::string name;
    std::string response;
    std::vector<std::string> predictors;
};

const std::vector<Study>& studies();

// Throws NameError listing the valid names.
const Study& find_study(std::string_view name);

std::string study_names();

}  // namespace mburqr
