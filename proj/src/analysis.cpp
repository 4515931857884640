#include "linkbench/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>
#include <utility>

#include "linkbench/linalg.hpp"

namespace linkbench {

namespace {

struct MeanAcc {
    double sum = 0.0;
    std::size_t count = 0;
    void add(double x) {
        sum += x;
        ++count;
    }
    double mean() const { return sum / static_cast<double>(count); }
};

// mean AUC per (network, sampler, predictor) over successful records
using CellKey = std::tuple<std::string, std::string, std::string>;
std::map<CellKey, MeanAcc> cell_means(const std::vector<AucRecord>& records) {
    std::map<CellKey, MeanAcc> acc;
    for (const AucRecord& r : records)
        if (r.status == "ok" && r.auc)
            acc[{r.network, r.sampler, r.predictor}].add(*r.auc);
    return acc;
}

struct Pca2 {
    std::vector<double> pc1, pc2;
    double explained_1 = 0.0, explained_2 = 0.0;
};

// Top-2 principal components of a rows x cols matrix (row-major). Columns are
// mean-centered only. The smaller of the Gram/covariance problems is solved
// densely; each component's largest-magnitude entry is made positive.
Pca2 pca_top2(std::vector<double> x, std::size_t rows, std::size_t cols) {
    if (rows < 2) throw DataError("pca: need at least 2 rows");
    for (std::size_t j = 0; j < cols; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < rows; ++i) mean += x[i * cols + j];
        mean /= static_cast<double>(rows);
        for (std::size_t i = 0; i < rows; ++i) x[i * cols + j] -= mean;
    }
    const double denom = static_cast<double>(rows - 1);

    // component vectors (length cols) for the top-2 eigenvalues
    std::vector<std::vector<double>> comps;
    std::vector<double> eigvals;
    double total_variance = 0.0;

    if (rows <= cols) {
        std::vector<double> gram(rows * rows, 0.0);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t k = i; k < rows; ++k) {
                double dot = 0.0;
                for (std::size_t j = 0; j < cols; ++j) dot += x[i * cols + j] * x[k * cols + j];
                gram[i * rows + k] = gram[k * rows + i] = dot / denom;
            }
        for (std::size_t i = 0; i < rows; ++i) total_variance += gram[i * rows + i];
        const EigenPairs ep = jacobi_eigensymm(gram, rows);
        for (std::size_t c = 0; c < 2 && c < ep.values.size(); ++c) {
            eigvals.push_back(std::max(0.0, ep.values[c]));
            // covariance eigenvector v = X^T u / ||X^T u||
            std::vector<double> v(cols, 0.0);
            for (std::size_t j = 0; j < cols; ++j)
                for (std::size_t i = 0; i < rows; ++i)
                    v[j] += x[i * cols + j] * ep.vectors[c][i];
            double norm = 0.0;
            for (double t : v) norm += t * t;
            norm = std::sqrt(norm);
            if (norm > 1e-14)
                for (double& t : v) t /= norm;
            comps.push_back(std::move(v));
        }
    } else {
        std::vector<double> cov(cols * cols, 0.0);
        for (std::size_t j = 0; j < cols; ++j)
            for (std::size_t k = j; k < cols; ++k) {
                double dot = 0.0;
                for (std::size_t i = 0; i < rows; ++i) dot += x[i * cols + j] * x[i * cols + k];
                cov[j * cols + k] = cov[k * cols + j] = dot / denom;
            }
        for (std::size_t j = 0; j < cols; ++j) total_variance += cov[j * cols + j];
        const EigenPairs ep = jacobi_eigensymm(cov, cols);
        for (std::size_t c = 0; c < 2 && c < ep.values.size(); ++c) {
            eigvals.push_back(std::max(0.0, ep.values[c]));
            comps.push_back(ep.vectors[c]);
        }
    }

    Pca2 out;
    out.pc1.assign(rows, 0.0);
    out.pc2.assign(rows, 0.0);
    for (std::size_t c = 0; c < comps.size(); ++c) {
        std::vector<double>& v = comps[c];
        // deterministic sign: largest-magnitude entry positive
        std::size_t arg = 0;
        for (std::size_t j = 1; j < v.size(); ++j)
            if (std::fabs(v[j]) > std::fabs(v[arg])) arg = j;
        if (v[arg] < 0.0)
            for (double& t : v) t = -t;
        std::vector<double>& dst = c == 0 ? out.pc1 : out.pc2;
        for (std::size_t i = 0; i < rows; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < cols; ++j) s += x[i * cols + j] * v[j];
            dst[i] = s;
        }
    }
    if (total_variance > 1e-14) {
        out.explained_1 = eigvals.empty() ? 0.0 : eigvals[0] / total_variance;
        out.explained_2 = eigvals.size() < 2 ? 0.0 : eigvals[1] / total_variance;
    }
    return out;
}

}  // namespace

std::vector<std::string> record_domains(const std::vector<AucRecord>& records) {
    std::set<std::string> seen;
    for (const AucRecord& r : records) seen.insert(r.domain);
    return {seen.begin(), seen.end()};
}

AggregateTable aggregate(const std::vector<AucRecord>& records, const std::string& domain) {
    AggregateTable table;
    table.domain = domain;
    for (SamplerKind k : all_samplers()) {
        table.samplers.push_back(sampler_name(k));
        table.categories.push_back(category_name(sampler_category(k)));
    }
    for (PredictorKind k : all_predictors()) table.predictors.push_back(predictor_name(k));
    table.cells.assign(table.samplers.size(),
                       std::vector<AggregateCell>(table.predictors.size()));

    bool any = false;
    std::map<std::pair<std::string, std::string>, MeanAcc> acc;
    for (const AucRecord& r : records) {
        if (r.domain != domain) continue;
        any = true;
        if (r.status == "ok" && r.auc) acc[{r.sampler, r.predictor}].add(*r.auc);
    }
    if (!any) throw DataError("aggregate: no records for domain " + domain);

    for (std::size_t i = 0; i < table.samplers.size(); ++i) {
        double best = -1.0;
        for (std::size_t j = 0; j < table.predictors.size(); ++j) {
            auto it = acc.find({table.samplers[i], table.predictors[j]});
            if (it == acc.end()) continue;
            table.cells[i][j].mean = it->second.mean();
            table.cells[i][j].support = it->second.count;
            best = std::max(best, it->second.mean());
        }
        for (std::size_t j = 0; j < table.predictors.size(); ++j)
            if (table.cells[i][j].has_value() && table.cells[i][j].mean == best)
                table.cells[i][j].best = true;
    }
    return table;
}

PcaResult pca_networks(const std::vector<AucRecord>& records) {
    const auto means = cell_means(records);
    std::map<std::string, std::string> domain_of;
    for (const AucRecord& r : records) domain_of[r.network] = r.domain;

    PcaResult out;
    for (SamplerKind s : all_samplers())
        for (PredictorKind p : all_predictors())
            out.columns.push_back(sampler_name(s) + "/" + predictor_name(p));

    std::vector<std::string> complete;
    std::vector<double> matrix;
    for (const auto& [network, domain] : domain_of) {
        std::vector<double> row;
        bool full = true;
        for (SamplerKind s : all_samplers()) {
            for (PredictorKind p : all_predictors()) {
                auto it = means.find({network, sampler_name(s), predictor_name(p)});
                if (it == means.end()) {
                    full = false;
                    break;
                }
                row.push_back(it->second.mean());
            }
            if (!full) break;
        }
        if (!full) {
            out.excluded.push_back(network);
            continue;
        }
        complete.push_back(network);
        matrix.insert(matrix.end(), row.begin(), row.end());
    }
    if (complete.size() < 3)
        throw DataError("pca_networks: fewer than 3 networks with complete AUC vectors");

    const Pca2 pca = pca_top2(std::move(matrix), complete.size(), out.columns.size());
    out.entities = complete;
    for (const std::string& net : complete) out.labels.push_back(domain_of.at(net));
    out.pc1 = pca.pc1;
    out.pc2 = pca.pc2;
    out.explained_1 = pca.explained_1;
    out.explained_2 = pca.explained_2;
    return out;
}

PcaResult pca_samplers(const std::vector<AucRecord>& records, const std::string& domain,
                       const std::string& predictor) {
    const auto means = cell_means(records);
    std::set<std::string> network_set;
    for (const AucRecord& r : records)
        if (r.domain == domain && r.predictor == predictor) network_set.insert(r.network);
    if (network_set.empty())
        throw DataError("pca_samplers: no records for domain " + domain + ", predictor " +
                        predictor);
    const std::vector<std::string> networks(network_set.begin(), network_set.end());

    PcaResult out;
    out.columns = networks;
    std::vector<double> matrix;
    std::vector<std::string> gaps;
    for (SamplerKind s : all_samplers()) {
        const std::string sname = sampler_name(s);
        for (const std::string& net : networks) {
            auto it = means.find({net, sname, predictor});
            if (it == means.end())
                gaps.push_back(sname + "@" + net);
            else
                matrix.push_back(it->second.mean());
        }
        out.entities.push_back(sname);
        out.labels.push_back(predictor);
    }
    if (!gaps.empty()) {
        std::string msg = "pca_samplers: missing coverage:";
        for (const std::string& g : gaps) msg += " " + g;
        throw DataError(msg);
    }

    const Pca2 pca = pca_top2(std::move(matrix), out.entities.size(), networks.size());
    out.pc1 = pca.pc1;
    out.pc2 = pca.pc2;
    out.explained_1 = pca.explained_1;
    out.explained_2 = pca.explained_2;
    return out;
}

}  // namespace linkbench
