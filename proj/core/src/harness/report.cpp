#include "sparsedom/harness/report.hpp"

#include <algorithm>
#include <boost/algorithm/string.hpp>
#include <cmath>
#include <limits>
#include <fstream>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <sstream>

#include "sparsedom/error.hpp"

namespace sparsedom::harness {

namespace {

constexpr const char* kHeader = "experiment,case,resolution,weight,a_p,nu_ainf,sigma_ainf,lhs,rhs,ratio,extra";

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

double parse_num(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  return std::stod(s);
}

// Fields never contain quotes; commas inside free text are replaced.
std::string field(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  return s;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot write " + path.string());
  out << text;
}

}  // namespace

std::string rows_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << kCsvSchema << '\n' << kHeader << '\n';
  for (const auto& r : rows) {
    os << field(r.experiment) << ',' << field(r.case_id) << ',' << r.resolution << ',' << field(r.weight) << ','
       << num(r.a_p) << ',' << num(r.nu_ainf) << ',' << num(r.sigma_ainf) << ',' << num(r.lhs) << ',' << num(r.rhs)
       << ',' << num(r.ratio) << ',' << field(r.extra) << '\n';
  }
  return os.str();
}

std::vector<SweepRow> rows_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != kCsvSchema) throw ParameterError("missing or unknown CSV schema line");
  if (!std::getline(is, line) || line != kHeader) throw ParameterError("unexpected CSV header");
  std::vector<SweepRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    boost::split(f, line, boost::is_any_of(","));
    if (f.size() != 11) throw ParameterError("CSV row has " + std::to_string(f.size()) + " fields");
    SweepRow r;
    r.experiment = f[0];
    r.case_id = f[1];
    r.resolution = std::stoi(f[2]);
    r.weight = f[3];
    r.a_p = parse_num(f[4]);
    r.nu_ainf = parse_num(f[5]);
    r.sigma_ainf = parse_num(f[6]);
    r.lhs = parse_num(f[7]);
    r.rhs = parse_num(f[8]);
    r.ratio = parse_num(f[9]);
    r.extra = f[10];
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string summary_text(const RunReport& r) {
  std::ostringstream os;
  os << "experiment = " << r.experiment << '\n' << "rows = " << r.rows.size() << '\n';
  for (const auto& [k, v] : r.summary) os << k << " = " << num(v) << '\n';
  for (const auto& n : r.notes) os << "note: " << n << '\n';
  return os.str();
}

std::string summary_json(const RunReport& r) {
  nlohmann::json j;
  j["experiment"] = r.experiment;
  j["rows"] = r.rows.size();
  nlohmann::json s = nlohmann::json::object();
  for (const auto& [k, v] : r.summary) {
    if (std::isfinite(v)) s[k] = v;
    else s[k] = num(v);
  }
  j["summary"] = s;
  j["notes"] = r.notes;
  return j.dump(2);
}

std::vector<std::filesystem::path> write_report(const RunReport& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> out;
  const std::string stem = r.experiment;
  out.push_back(dir / (stem + ".csv"));
  write_file(out.back(), rows_to_csv(r.rows));
  out.push_back(dir / (stem + "_summary.txt"));
  write_file(out.back(), summary_text(r));
  out.push_back(dir / (stem + "_summary.json"));
  write_file(out.back(), summary_json(r));
  for (const auto& [name, doc] : r.documents) {
    out.push_back(dir / (stem + "_" + name + ".json"));
    write_file(out.back(), doc + "\n");
  }
  return out;
}

}  // namespace sparsedom::harness
