#pragma once

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "rptopic/conditions.hpp"
#include "rptopic/eval.hpp"
#include "rptopic/novel_detect.hpp"

namespace rptopic {

using Json = nlohmann::json;

std::ifstream open_input(const std::filesystem::path& path);
std::ofstream open_output(const std::filesystem::path& path);

// Dense matrix as TSV: a header line then one row per line, values at full
// precision. A non-empty labels vector adds a leading "word" column.
struct LabeledMatrix {
  Eigen::MatrixXd values;
  std::vector<std::string> labels;  // empty when the file had no word column
};

void write_matrix_tsv(std::ostream& out, const Eigen::MatrixXd& m,
                      const std::vector<std::string>& labels = {},
                      const std::string& column_prefix = "topic_");
// The first header field "word" marks a label column.
LabeledMatrix read_matrix_tsv(std::istream& in);

// One line per word: token, qhat, cluster id (0 when unclustered).
void write_solid_angles_tsv(std::ostream& out, const SolidAngleProfile& profile,
                            const NovelWordSet& novel, const std::vector<std::string>& vocab);

Json to_json(const ConditionReport& report);
Json to_json(const EvalResult& result);

void write_json(const std::filesystem::path& path, const Json& j);
Json read_json(const std::filesystem::path& path);

}  // namespace rptopic
