#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace medgkrp {

// One reviewer's scores for one generated graph. Scores are 1-4; half points
// occur in real review data (a reviewer may answer "3-4").
struct ReviewRecord {
    std::string condition;
    std::string model;
    std::string reviewer;
    double accuracy = 0.0;
    double comprehensiveness = 0.0;
};

struct ReviewLoadResult {
    std::vector<ReviewRecord> records;
    std::vector<std::string> warnings; // cells with != 3 reviewers etc.
};

// CSV columns: condition, model, reviewer_id, accuracy, comprehensiveness.
// A header row is detected and skipped. Out-of-range scores and short rows
// are errors naming the line number.
ReviewLoadResult load_reviews(const std::filesystem::path& file);
ReviewLoadResult parse_reviews(const std::string& text);

struct AggregateCell {
    double acc_mean = 0.0;
    double acc_variance = 0.0; // sample variance (n-1)
    double comp_mean = 0.0;
    double comp_variance = 0.0;
    int n = 0;
};

struct ModelSummary {
    double avg_acc_score = 0.0;      // mean of cell accuracy means
    double avg_comp_score = 0.0;
    double avg_acc_variance = 0.0;   // mean of cell accuracy variances
    double avg_comp_variance = 0.0;
};

struct ReviewAggregate {
    // (condition, model) -> cell.
    std::map<std::pair<std::string, std::string>, AggregateCell> cells;
    std::map<std::string, ModelSummary> models;
    // condition -> (avg accuracy, avg comprehensiveness) across models.
    std::map<std::string, std::pair<double, double>> condition_averages;
};

ReviewAggregate aggregate(const std::vector<ReviewRecord>& records);

} // namespace medgkrp
