#include "wwnf/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wwnf {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

json polynomial_to_json(const Poly& p) {
    std::vector<Monomial> order;
    p.for_each([&](const Monomial& m, const Cxd&) { order.push_back(m); });
    std::sort(order.begin(), order.end());
    json arr = json::array();
    for (const auto& m : order) {
        Cxd c = p.coeff(m);
        json modes = json::array();
        for (const Mode& md : m) modes.push_back({md.j, md.sigma});
        arr.push_back({{"degree", m.degree()},
                       {"modes", modes},
                       {"re", c.re},
                       {"im", c.im}});
    }
    return arr;
}

Poly polynomial_from_json(const json& j) {
    Poly p;
    for (const auto& e : j) {
        Monomial m;
        for (const auto& md : e.at("modes"))
            m.push({md.at(0).get<std::int32_t>(), md.at(1).get<std::int32_t>()});
        m.canonicalize();
        p.add(m, Cxd(e.at("re").get<double>(), e.at("im").get<double>()));
    }
    return p;
}

std::uint64_t content_hash(const Poly& p) {
    std::vector<Monomial> order;
    p.for_each([&](const Monomial& m, const Cxd&) { order.push_back(m); });
    std::sort(order.begin(), order.end());
    std::string s;
    for (const auto& m : order) {
        Cxd c = p.coeff(m);
        for (const Mode& md : m)
            s += std::to_string(md.j) + (md.sigma > 0 ? "+" : "-");
        s += ":" + fmt_double(c.re) + "," + fmt_double(c.im) + ";";
    }
    return fnv1a(s);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

json make_manifest(const json& config, std::uint64_t seed,
                   const std::vector<std::pair<std::string, std::uint64_t>>& input_hashes,
                   double wall_seconds) {
    json inputs = json::object();
    for (auto& [name, h] : input_hashes) {
        char buf[20];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
        inputs[name] = buf;
    }
    char chash[20];
    std::snprintf(chash, sizeof chash, "%016llx",
                  static_cast<unsigned long long>(fnv1a(config.dump())));
    return json{{"config", config},
                {"config_hash", chash},
                {"seed", seed},
                {"input_hashes", inputs},
                {"toolkit_version", "wwnf 0.1.0"},
                {"wall_seconds", wall_seconds}};
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace wwnf
