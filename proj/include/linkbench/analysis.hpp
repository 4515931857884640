#pragma once

#include <string>
#include <vector>

#include "linkbench/evalpipe.hpp"

namespace linkbench {

struct AggregateCell {
    double mean = 0.0;
    std::size_t support = 0;  // successful records behind the mean
    bool best = false;        // row maximum (ties all marked)
    bool has_value() const { return support > 0; }
};

/// One per-domain sampler x predictor table of mean AUC over
/// networks x repeats x folds; failed records excluded.
struct AggregateTable {
    std::string domain;
    std::vector<std::string> categories;  // per row
    std::vector<std::string> samplers;    // 20 rows in category order
    std::vector<std::string> predictors;  // 9 columns in stable order
    std::vector<std::vector<AggregateCell>> cells;
};

AggregateTable aggregate(const std::vector<AucRecord>& records, const std::string& domain);

/// All domains present in the records, in sorted order.
std::vector<std::string> record_domains(const std::vector<AucRecord>& records);

struct PcaResult {
    std::vector<std::string> entities;  // networks or samplers
    std::vector<std::string> labels;    // domain (networks mode) / predictor (samplers mode)
    std::vector<double> pc1, pc2;       // scores per entity
    double explained_1 = 0.0, explained_2 = 0.0;  // variance fractions
    std::vector<std::string> excluded;  // complete-case exclusions (networks mode)
    std::vector<std::string> columns;   // feature-column order, recorded for audit
};

/// Networks as rows, all sampler x predictor mean AUCs as features;
/// complete-case over the full grid, mean-centered columns, top-2 components.
PcaResult pca_networks(const std::vector<AucRecord>& records);

/// Samplers as rows, per-network mean AUCs of one (domain, predictor) panel as
/// features. Throws DataError listing gaps when sampler coverage is missing.
PcaResult pca_samplers(const std::vector<AucRecord>& records, const std::string& domain,
                       const std::string& predictor);

}  // namespace linkbench
