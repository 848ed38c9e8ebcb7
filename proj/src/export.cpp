#include "solitonlab/export.hpp"

#include <cstdio>
#include <fstream>

namespace sl {

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_field(fields[i]);
  }
  out += "\r\n";
  return out;
}

std::vector<std::string> trajectory_csv_header(int n) {
  std::vector<std::string> h{"s", "sigma", "varsigma"};
  for (int i = 1; i <= n; ++i) h.push_back("C_" + std::to_string(i));
  for (int i = 1; i <= n; ++i) h.push_back("T_" + std::to_string(i));
  for (const char* k : {"lambda", "mu", "nu", "curvature", "V", "delta_total", "delta_W", "z"}) h.push_back(k);
  return h;
}

std::string trajectory_csv(const Trajectory& traj) {
  const int n = traj.params.dimension();
  std::string out = csv_row(trajectory_csv_header(n));
  std::vector<std::string> row;
  for (const auto& x : traj.samples) {
    row.clear();
    row.push_back(format_number(x.s));
    row.push_back(format_number(x.sigma));
    row.push_back(format_number(x.varsigma));
    for (int i = 0; i < n; ++i) row.push_back(format_number(x.state.C[i]));
    for (int i = 0; i < n; ++i) row.push_back(format_number(x.state.T[i]));
    const auto& d = x.diag;
    row.push_back(format_number(d.lambda));
    row.push_back(d.mu ? format_number(*d.mu) : "");
    row.push_back(d.nu ? format_number(*d.nu) : "");
    row.push_back(format_number(d.curvature));
    row.push_back(format_number(d.V));
    row.push_back(format_number(d.delta_total));
    row.push_back(format_number(d.delta_W));
    row.push_back(format_number(d.z));
    out += csv_row(row);
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) fail(ErrorCode::io_error, "cannot open '" + path + "' for writing");
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) fail(ErrorCode::io_error, "write to '" + path + "' failed");
}

}  // namespace sl
