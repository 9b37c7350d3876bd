#include "sumapprox/json_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace sumapprox {

namespace {

using nlohmann::json;

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::runtime_error("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

}  // namespace

void save_domain(const Domain& d, const std::string& path) {
    json j;
    j["points"] = json::array();
    for (const Point& p : d.points) {
        json jp;
        jp["id"] = p.id;
        if (!p.coords.empty()) jp["coords"] = p.coords;
        j["points"].push_back(std::move(jp));
    }
    j["factors"] = d.factors;
    write_text_file(path, j.dump(1) + "\n");
}

Domain load_domain(const std::string& path, std::vector<std::string>* warnings) {
    const json j = read_json_file(path);
    if (!j.contains("points") || !j["points"].is_array())
        throw std::runtime_error(path + ": missing \"points\" array");
    if (!j.contains("factors") || !j["factors"].is_array())
        throw std::runtime_error(path + ": missing \"factors\" array");

    std::vector<Point> points;
    for (const auto& jp : j["points"]) {
        Point p;
        if (!jp.contains("id") || !jp["id"].is_number_integer())
            throw std::runtime_error(path + ": point without integer \"id\"");
        p.id = jp["id"].get<int>();
        if (jp.contains("coords")) p.coords = jp["coords"].get<std::vector<double>>();
        points.push_back(std::move(p));
    }
    std::vector<std::vector<int>> factors;
    for (const auto& jf : j["factors"]) {
        if (!jf.is_array()) throw std::runtime_error(path + ": factor is not an array");
        factors.push_back(jf.get<std::vector<int>>());
    }
    try {
        return validate_domain(std::move(points), std::move(factors), warnings);
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

void save_field(const Field& f, const std::string& path) {
    write_text_file(path, json(f).dump() + "\n");
}

Field load_field(const std::string& path, int expected_size) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw std::runtime_error(path + ": empty field file");

    Field f;
    if (text[first] == '[') {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::parse_error& e) {
            throw std::runtime_error("malformed JSON in " + path + ": " + e.what());
        }
        f = j.get<Field>();
    } else {
        // CSV with header id,value; rows indexed by point id.
        std::istringstream lines(text);
        std::string line;
        if (!std::getline(lines, line) || line.rfind("id,value", 0) != 0)
            throw std::runtime_error(path + ": expected CSV header 'id,value'");
        f.assign(expected_size, 0.0);
        std::vector<bool> seen(expected_size, false);
        while (std::getline(lines, line)) {
            if (line.empty()) continue;
            const size_t comma = line.find(',');
            if (comma == std::string::npos)
                throw std::runtime_error(path + ": malformed CSV row '" + line + "'");
            const int id = std::stoi(line.substr(0, comma));
            if (id < 0 || id >= expected_size)
                throw std::runtime_error(path + ": field row id out of range");
            f[id] = std::stod(line.substr(comma + 1));
            seen[id] = true;
        }
        for (int i = 0; i < expected_size; ++i)
            if (!seen[i]) throw std::runtime_error(path + ": missing value for point id " +
                                                   std::to_string(i));
    }
    if (f.size() != static_cast<size_t>(expected_size))
        throw std::runtime_error(path + ": field length " + std::to_string(f.size()) +
                                 " does not match domain size " +
                                 std::to_string(expected_size));
    return f;
}

std::string bolt_to_json(const Bolt& b) {
    json j;
    j["start_relation"] = b.start_relation;
    j["points"] = b.points;
    return j.dump();
}

Bolt bolt_from_json(const std::string& text) {
    const json j = json::parse(text);
    Bolt b;
    b.start_relation = j.at("start_relation").get<int>();
    b.points = j.at("points").get<std::vector<int>>();
    return b;
}

void save_bolt(const Bolt& b, const std::string& path) {
    write_text_file(path, bolt_to_json(b) + "\n");
}

std::string oracle_result_to_json(const OracleResult& r) {
    json j;
    j["error"] = r.error;
    j["status"] = r.status == OracleResult::Status::optimal ? "optimal" : "numerical-trouble";
    j["components"] = json::array();
    for (const auto& c : r.components) j["components"].push_back(c.values);
    j["dual_weights"] = r.dual_weights;
    return j.dump(1);
}

void save_oracle_result(const OracleResult& r, const std::string& path) {
    write_text_file(path, oracle_result_to_json(r) + "\n");
}

std::string levelling_state_to_json(const LevellingState& st) {
    json j;
    j["terminal_norm"] = st.norm_history.back();
    j["steps"] = st.step_count;
    j["termination"] = st.termination == Termination::converged       ? "converged"
                       : st.termination == Termination::max_steps_reached ? "max_steps"
                                                                          : "none";
    j["components"] = json::array();
    for (const auto& c : st.components) j["components"].push_back(c.values);
    j["norm_history"] = st.norm_history;
    return j.dump(1);
}

}  // namespace sumapprox
