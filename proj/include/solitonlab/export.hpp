#pragma once

#include <string>
#include <vector>

#include "solitonlab/soliton.hpp"

namespace sl {

// %.17g.
std::string format_number(double x);

// RFC 4180 field: quoted when it contains a comma, quote or line break.
std::string csv_field(const std::string& s);

std::string csv_row(const std::vector<std::string>& fields);

// Header: s,sigma,varsigma,C_1..C_n,T_1..T_n,lambda,mu,nu,curvature,V,
// delta_total,delta_W,z. Absent mu / nu are written as empty fields.
std::vector<std::string> trajectory_csv_header(int n);
std::string trajectory_csv(const Trajectory& traj);

// Throws io_error.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace sl
