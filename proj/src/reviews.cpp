#include "medgkrp/reviews.hpp"

#include "medgkrp/errors.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace medgkrp {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_score(const std::string& field, int line_no) {
    double value;
    try {
        std::size_t pos = 0;
        value = std::stod(field, &pos);
        if (pos != field.size()) throw std::invalid_argument(field);
    } catch (const std::exception&) {
        throw LoadError("line " + std::to_string(line_no) +
                        ": score is not a number: " + field);
    }
    if (value < 1.0 || value > 4.0)
        throw LoadError("line " + std::to_string(line_no) +
                        ": score out of range [1,4]: " + field);
    return value;
}

struct CellScores {
    std::vector<double> acc;
    std::vector<double> comp;
};

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_variance(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double m = mean_of(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return ss / static_cast<double>(v.size() - 1);
}

} // namespace

ReviewLoadResult parse_reviews(const std::string& text) {
    ReviewLoadResult result;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool seen_data = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty() || line[0] == '#') continue;
        std::vector<std::string> fields;
        std::istringstream row(line);
        std::string field;
        while (std::getline(row, field, ',')) fields.push_back(trim(field));
        if (!seen_data && !fields.empty() && fields[0] == "condition")
            continue; // header
        seen_data = true;
        if (fields.size() != 5)
            throw LoadError("line " + std::to_string(line_no) +
                            ": expected 5 fields, got " +
                            std::to_string(fields.size()));
        ReviewRecord rec;
        rec.condition = fields[0];
        rec.model = fields[1];
        rec.reviewer = fields[2];
        rec.accuracy = parse_score(fields[3], line_no);
        rec.comprehensiveness = parse_score(fields[4], line_no);
        if (rec.condition.empty() || rec.model.empty())
            throw LoadError("line " + std::to_string(line_no) +
                            ": empty condition or model");
        result.records.push_back(std::move(rec));
    }

    std::map<std::pair<std::string, std::string>, int> counts;
    for (const auto& r : result.records) ++counts[{r.condition, r.model}];
    for (const auto& [cell, n] : counts)
        if (n != 3)
            result.warnings.push_back(cell.first + " / " + cell.second +
                                      ": " + std::to_string(n) +
                                      " reviewers (expected 3)");
    return result;
}

ReviewLoadResult load_reviews(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw LoadError("cannot open review file: " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_reviews(buf.str());
}

ReviewAggregate aggregate(const std::vector<ReviewRecord>& records) {
    if (records.empty()) throw ConfigError("no review records to aggregate");

    std::map<std::pair<std::string, std::string>, CellScores> cells;
    for (const auto& r : records) {
        auto& cell = cells[{r.condition, r.model}];
        cell.acc.push_back(r.accuracy);
        cell.comp.push_back(r.comprehensiveness);
    }

    ReviewAggregate out;
    std::map<std::string, std::vector<const AggregateCell*>> by_model;
    for (const auto& [key, scores] : cells) {
        AggregateCell cell;
        cell.n = static_cast<int>(scores.acc.size());
        cell.acc_mean = mean_of(scores.acc);
        cell.acc_variance = sample_variance(scores.acc);
        cell.comp_mean = mean_of(scores.comp);
        cell.comp_variance = sample_variance(scores.comp);
        auto [it, _] = out.cells.emplace(key, cell);
        by_model[key.second].push_back(&it->second);
    }

    for (const auto& [model, model_cells] : by_model) {
        ModelSummary s;
        for (const auto* c : model_cells) {
            s.avg_acc_score += c->acc_mean;
            s.avg_comp_score += c->comp_mean;
            s.avg_acc_variance += c->acc_variance;
            s.avg_comp_variance += c->comp_variance;
        }
        auto n = static_cast<double>(model_cells.size());
        s.avg_acc_score /= n;
        s.avg_comp_score /= n;
        s.avg_acc_variance /= n;
        s.avg_comp_variance /= n;
        out.models.emplace(model, s);
    }

    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>>
        per_condition;
    for (const auto& [key, cell] : out.cells) {
        per_condition[key.first].first.push_back(cell.acc_mean);
        per_condition[key.first].second.push_back(cell.comp_mean);
    }
    for (const auto& [condition, pair] : per_condition)
        out.condition_averages.emplace(
            condition,
            std::make_pair(mean_of(pair.first), mean_of(pair.second)));
    return out;
}

} // namespace medgkrp
