#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mburqr/model.hpp"

namespace mburqr {

struct IcSet {
    double aic = 0.0;
    double caic = 0.0;
    double bic = 0.0;
    double hqic = 0.0;
};

IcSet information_criteria(double ll, std::size_t p, std::size_t n);

struct LrtResult {
    double statistic = 0.0;
    double p_value = 1.0;
    // The raw statistic was negative and has been set to 0.
    bool floored = false;
};

LrtResult lrt(double ll_full, double ll_nested, std::size_t df);

double pseudo_r2(double ll_null, double ll_full, std::size_t n);

struct LadderRow {
    std::string label;
    std::vector<std::string> removed;
    std::vector<std::string> retained;
    std::optional<FitResult> fit;
    std::string error;
    LrtResult lrt_vs_full;
    bool sign_preserved = true;
    IcSet ic;
    double r2_vs_null = 0.0;
};

struct LadderReport {
    FitResult full;
    FitResult null_model;
    IcSet full_ic;
    LrtResult full_vs_null;
    double full_r2 = 0.0;
    // One single-predictor fit per predictor, on the full model's rows.
    std::vector<FitResult> single_fits;
    std::vector<LadderRow> rows;
};

// Every single-predictor removal followed by removal of all predictors.
std::vector<std::vector<std::string>> default_removal_subsets(const ModelSpec& spec);

// "Rx1,x3" from 1-based predictor positions; "Full" and "Null" at the extremes.
std::string ladder_label(const ModelSpec& spec, const std::vector<std::string>& removed);

LadderReport drop_one_ladder(const ModelSpec& spec, const DesignData& data,
                             const std::vector<std::vector<std::string>>& removal_subsets,
                             const NmOptions& options = {});

}  // namespace mburqr
