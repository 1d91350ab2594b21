#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "evagan/data.hpp"

namespace evagan {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

RawTable load_tabular_csv(const std::string& path, const std::string& label_column,
                          const std::string& minority_value) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_tabular_csv: cannot open " + path);

    std::string line;
    if (!std::getline(in, line) || trim(line).empty())
        throw std::runtime_error("load_tabular_csv: empty file " + path);

    const auto header = split_csv_line(line);
    std::size_t label_idx = header.size();
    std::vector<std::string> names;
    for (std::size_t i = 0; i < header.size(); ++i) {
        const std::string name = trim(header[i]);
        if (name == label_column) {
            label_idx = i;
        } else {
            names.push_back(name);
        }
    }
    if (label_idx == header.size())
        throw std::runtime_error("load_tabular_csv: label column '" + label_column +
                                 "' not found in " + path);

    std::vector<double> values;
    std::vector<int> labels;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw std::runtime_error("load_tabular_csv: row " + std::to_string(row) + " has " +
                                     std::to_string(fields.size()) + " fields, expected " +
                                     std::to_string(header.size()));
        for (std::size_t i = 0; i < fields.size(); ++i) {
            const std::string cell = trim(fields[i]);
            if (i == label_idx) {
                labels.push_back(cell == minority_value ? kMinorityLabel : kMajorityLabel);
                continue;
            }
            // Accepts inf/nan spellings; those columns are dropped later by
            // preprocessing rather than rejected here.
            try {
                std::size_t pos = 0;
                const double v = std::stod(cell, &pos);
                if (pos != cell.size()) throw std::invalid_argument(cell);
                values.push_back(v);
            } catch (const std::exception&) {
                throw std::runtime_error("load_tabular_csv: unparseable cell at row " +
                                         std::to_string(row) + ", column '" +
                                         trim(header[i]) + "': '" + cell + "'");
            }
        }
    }
    if (labels.empty()) throw std::runtime_error("load_tabular_csv: no data rows in " + path);

    RawTable t;
    t.column_names = names;
    t.values = Matrix(labels.size(), names.size(), std::move(values));
    t.labels = std::move(labels);
    return t;
}

} // namespace evagan
