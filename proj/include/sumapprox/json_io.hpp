#ifndef SUMAPPROX_JSON_IO_HPP
#define SUMAPPROX_JSON_IO_HPP

#include <string>
#include <vector>

#include "sumapprox/bolts.hpp"
#include "sumapprox/domain.hpp"
#include "sumapprox/levelling.hpp"
#include "sumapprox/oracle.hpp"

namespace sumapprox {

// Domain files: {"points":[{"id":0,"coords":[...]},...],
//                "factors":[[c_00,...],[c_10,...],...]}.
void save_domain(const Domain& d, const std::string& path);
Domain load_domain(const std::string& path, std::vector<std::string>* warnings = nullptr);

// Field files: JSON array of reals (index-aligned with point ids) or CSV
// with header id,value. The loader distinguishes them by content.
void save_field(const Field& f, const std::string& path);
Field load_field(const std::string& path, int expected_size);

std::string bolt_to_json(const Bolt& b);
Bolt bolt_from_json(const std::string& text);
void save_bolt(const Bolt& b, const std::string& path);

std::string oracle_result_to_json(const OracleResult& r);
void save_oracle_result(const OracleResult& r, const std::string& path);

std::string levelling_state_to_json(const LevellingState& st);

}  // namespace sumapprox

#endif
