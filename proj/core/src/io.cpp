#include "calibsmooth/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "calibsmooth/errors.hpp"

namespace calibsmooth {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open input file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

bool parse_number(const std::string& text, double& out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc{} && ptr == end;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

Sample validate_pair(double f, double y, long row) {
  if (!std::isfinite(f) || f < 0.0 || f > 1.0) {
    throw parse_error("prediction not in [0,1]", row);
  }
  if (y != 0.0 && y != 1.0) {
    throw parse_error("outcome not in {0,1}", row);
  }
  return Sample{f, static_cast<int>(y)};
}

} // namespace

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

Dataset parse_csv(const std::string& text) {
  std::vector<Sample> samples;
  std::istringstream stream(text);
  std::string line;
  long row = 0;
  bool first_content_line = true;
  while (std::getline(stream, line)) {
    ++row;
    line = trim(line);
    if (line.empty()) continue;

    std::size_t comma = line.find(',');
    if (comma == std::string::npos) {
      if (first_content_line) {
        first_content_line = false;
        continue; // lone header token
      }
      throw parse_error("expected two comma-separated columns", row);
    }
    const std::string left = trim(line.substr(0, comma));
    const std::string right = trim(line.substr(comma + 1));
    if (right.find(',') != std::string::npos) {
      throw parse_error("expected exactly two columns", row);
    }

    double f = 0.0, y = 0.0;
    const bool numeric = parse_number(left, f) && parse_number(right, y);
    if (!numeric) {
      if (first_content_line) {
        first_content_line = false;
        continue; // header line like "f,y"
      }
      throw parse_error("malformed numeric fields", row);
    }
    first_content_line = false;
    samples.push_back(validate_pair(f, y, row));
  }
  if (samples.empty()) throw input_error("empty dataset");
  return Dataset(std::move(samples));
}

Dataset parse_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw input_error(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw input_error("JSON input must be an array of [f, y] pairs");

  std::vector<Sample> samples;
  samples.reserve(doc.size());
  long row = 0;
  for (const auto& item : doc) {
    ++row;
    if (!item.is_array() || item.size() != 2 || !item[0].is_number() || !item[1].is_number()) {
      throw parse_error("expected a two-element numeric array", row);
    }
    samples.push_back(validate_pair(item[0].get<double>(), item[1].get<double>(), row));
  }
  if (samples.empty()) throw input_error("empty dataset");
  return Dataset(std::move(samples));
}

Dataset load_dataset(const std::string& path, InputFormat format) {
  const std::string text = read_file(path);
  if (format == InputFormat::auto_detect) {
    if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) {
      format = InputFormat::json;
    } else if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) {
      format = InputFormat::csv;
    } else {
      const std::size_t first = text.find_first_not_of(" \t\r\n");
      format = (first != std::string::npos && text[first] == '[') ? InputFormat::json
                                                                  : InputFormat::csv;
    }
  }
  return format == InputFormat::json ? parse_json(text) : parse_csv(text);
}

std::string report_to_json(const Report& report) {
  ordered_json doc;
  doc["n"] = report.n;
  doc["smece_star"] = report.smece_star;
  doc["sigma_star"] = report.sigma_star;
  doc["tilde_smece"] = report.tilde_smece;
  doc["binned_ece"] = report.binned_ece;
  doc["bins_used"] = report.bins_used;
  if (report.smece_ci) {
    doc["smece_ci"] = {report.smece_ci->first, report.smece_ci->second};
  } else {
    doc["smece_ci"] = nullptr;
  }
  // Wall-clock time is not byte-reproducible; it goes to stderr instead.
  doc["runtime_ms"] = nullptr;
  doc["warnings"] = report.warnings;
  return doc.dump(2) + "\n";
}

std::string report_to_csv(const Report& report) {
  std::string out =
      "n,smece_star,sigma_star,tilde_smece,binned_ece,bins_used,"
      "smece_ci_lo,smece_ci_hi,runtime_ms,warnings\n";
  out += std::to_string(report.n);
  out += ",";
  out += format_double(report.smece_star);
  out += ",";
  out += format_double(report.sigma_star);
  out += ",";
  out += format_double(report.tilde_smece);
  out += ",";
  out += format_double(report.binned_ece);
  out += ",";
  out += std::to_string(report.bins_used);
  out += ",";
  if (report.smece_ci) {
    out += format_double(report.smece_ci->first);
    out += ",";
    out += format_double(report.smece_ci->second);
  } else {
    out += ",";
  }
  out += ",,\""; // runtime_ms deliberately blank
  for (std::size_t i = 0; i < report.warnings.size(); ++i) {
    if (i > 0) out += "; ";
    out += report.warnings[i];
  }
  out += "\"\n";
  return out;
}

std::string curves_to_csv(const DiagramData& diagram, const BootstrapBands* bands) {
  std::string out = "t,mu_hat,delta_hat,mu_lo,mu_hi\n";
  for (std::size_t i = 0; i < diagram.grid.size(); ++i) {
    out += format_double(diagram.grid[i]);
    out += ",";
    out += format_double(diagram.mu_hat[i]);
    out += ",";
    out += format_double(diagram.delta_hat[i]);
    out += ",";
    if (bands && i < bands->mu_band.size()) {
      out += format_double(bands->mu_band[i].first);
      out += ",";
      out += format_double(bands->mu_band[i].second);
    } else {
      // Zero-width band when bootstrap is disabled.
      out += format_double(diagram.mu_hat[i]);
      out += ",";
      out += format_double(diagram.mu_hat[i]);
    }
    out += "\n";
  }
  return out;
}

} // namespace calibsmooth
