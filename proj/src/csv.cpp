#include "bdpp/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "bdpp/error.hpp"
#include "bdpp/json_io.hpp"

namespace bdpp {

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::string run_to_csv(const RunResult& run) {
    std::ostringstream os;
    os << "t,objective_error";
    for (int r = 1; r <= run.constraint_dim; ++r) os << ",violation_" << r;
    os << ",queue_sum_norm,drift,drift_bound,lemma1_slack_min\n";
    for (const auto& rec : run.records) {
        os << rec.t << ',' << format_double(rec.objective_error);
        for (Eigen::Index r = 0; r < rec.violation.size(); ++r)
            os << ',' << format_double(rec.violation[r]);
        os << ',' << format_double(rec.queue_sum_norm) << ',' << format_double(rec.drift) << ','
           << format_double(rec.drift_bound) << ',' << format_double(rec.lemma1_slack_min)
           << '\n';
    }
    return os.str();
}

void write_run_csv(const RunResult& run, const std::string& path) {
    write_text_file(path, run_to_csv(run));
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_double(const std::string& s) {
    if (s == "nan") return std::nan("");
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw Error(ErrorCode::Parse, "csv: bad number '" + s + "'");
    return v;
}

}  // namespace

std::vector<CsvRow> read_run_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::Parse, "csv: empty file");

    std::vector<std::string> header = split_line(line);
    if (header.size() < 6 || header[0] != "t" || header[1] != "objective_error")
        throw Error(ErrorCode::Parse, "csv: unexpected header");
    const std::size_t p = header.size() - 6;  // violation columns

    std::vector<CsvRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields = split_line(line);
        if (fields.size() != header.size())
            throw Error(ErrorCode::Parse, "csv: row width differs from header");
        CsvRow row;
        row.t = std::strtol(fields[0].c_str(), nullptr, 10);
        row.objective_error = parse_double(fields[1]);
        for (std::size_t r = 0; r < p; ++r) row.violation.push_back(parse_double(fields[2 + r]));
        row.queue_sum_norm = parse_double(fields[2 + p]);
        row.drift = parse_double(fields[3 + p]);
        row.drift_bound = parse_double(fields[4 + p]);
        row.lemma1_slack_min = parse_double(fields[5 + p]);
        rows.push_back(std::move(row));
    }
    return rows;
}

CsvCheck verify_run_csv(const std::string& path) {
    CsvCheck check;
    for (const CsvRow& row : read_run_csv(path)) {
        ++check.rows;
        if (!std::isnan(row.lemma1_slack_min) && row.lemma1_slack_min < -1e-9) {
            check.ok = false;
            check.detail = "t=" + std::to_string(row.t) + ": lemma1_slack_min = " +
                           format_double(row.lemma1_slack_min);
            break;
        }
        if (!std::isnan(row.drift_bound) && !std::isnan(row.drift) &&
            row.drift > row.drift_bound + 1e-9) {
            check.ok = false;
            check.detail = "t=" + std::to_string(row.t) + ": drift " + format_double(row.drift) +
                           " exceeds bound " + format_double(row.drift_bound);
            break;
        }
    }
    return check;
}

}  // namespace bdpp
