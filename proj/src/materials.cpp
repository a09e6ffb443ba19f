#include "mrt/materials.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mrt {

namespace {

using nlohmann::json;

const std::vector<Material>& builtin_table() {
    static const std::vector<Material> table = {
        {"silicon<100>",   130e9, 2330.0, 0.28,  1000.0, 0.00023e7},
        {"polysilicon",    150e9, 2300.0, 0.226, 588.0,  0.001e7},
        {"polydiamond",    1144e9, 3500.0, 0.069, 800.0, 0.001e7},
        {"silicon-carbide", 415e9, 3200.0, 0.192, 800.0, 0.00083e7},
        {"polysige",       146e9, 4280.0, 0.23,  450.0,  0.005e7},
        {"nickel",         195e9, 8900.0, 0.31,  50.0,   1.43e7},
    };
    return table;
}

std::string normalized(std::string_view name) {
    std::string out;
    out.reserve(name.size());
    for (char c : name) {
        if (c == ' ' || c == '_') continue;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (out == "sic") return "silicon-carbide";
    if (out == "sige" || out == "polysi-ge") return "polysige";
    if (out == "silicon100" || out == "silicon-100") return "silicon<100>";
    return out;
}

int line_of_byte(const std::string& text, std::size_t byte) {
    int line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

} // namespace

void validate(const Material& m) {
    if (m.name.empty())
        raise(errc::invariant, "material: field 'name' must be non-empty");
    if (!(m.youngs_modulus > 0.0) || !std::isfinite(m.youngs_modulus))
        raise(errc::invariant, "material '" + m.name + "': field 'youngs_modulus' must be > 0");
    if (!(m.density > 0.0) || !std::isfinite(m.density))
        raise(errc::invariant, "material '" + m.name + "': field 'density' must be > 0");
    if (!(m.poisson >= 0.0 && m.poisson < 0.5))
        raise(errc::invariant, "material '" + m.name + "': field 'poisson' must lie in [0, 0.5)");
}

const Material& builtin_material(std::string_view name) {
    const std::string key = normalized(name);
    for (const Material& m : builtin_table())
        if (m.name == key) return m;
    std::string msg = "unknown material '" + std::string(name) + "'; available:";
    for (const Material& m : builtin_table()) msg += " " + m.name;
    raise(errc::unknown_material, msg);
}

std::vector<std::string> builtin_material_names() {
    std::vector<std::string> out;
    for (const Material& m : builtin_table()) out.push_back(m.name);
    return out;
}

double acoustic_velocity(const Material& m) {
    validate(m);
    return std::sqrt(m.youngs_modulus / m.density);
}

std::vector<Material> parse_materials(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        raise(errc::parse, "materials file: parse error at line "
              + std::to_string(line_of_byte(json_text, e.byte)) + ": " + e.what());
    }
    if (!doc.is_array())
        raise(errc::parse, "materials file: top-level value must be an array");

    std::vector<Material> out;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const json& rec = doc[i];
        if (!rec.is_object())
            raise(errc::parse, "materials file: record " + std::to_string(i) + " is not an object");
        Material m;
        try {
            m.name = rec.at("name").get<std::string>();
            m.youngs_modulus = rec.at("E_GPa").get<double>() * 1e9;
            m.density = rec.at("rho").get<double>();
            m.poisson = rec.at("poisson").get<double>();
            if (rec.contains("dep_temp_C")) m.deposition_temp_c = rec["dep_temp_C"].get<double>();
            if (rec.contains("conductivity")) m.conductivity = rec["conductivity"].get<double>();
        } catch (const json::exception& e) {
            raise(errc::parse, "materials file: record " + std::to_string(i)
                  + ": " + e.what());
        }
        validate(m);
        for (const Material& prev : out)
            if (prev.name == m.name)
                raise(errc::duplicate_material,
                      "materials file: duplicate material name '" + m.name + "'");
        out.push_back(std::move(m));
    }
    return out;
}

std::vector<Material> load_materials(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(errc::parse, "materials file: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_materials(ss.str());
}

std::string materials_to_json(const std::vector<Material>& mats) {
    json arr = json::array();
    for (const Material& m : mats) {
        json rec = {
            {"name", m.name},
            {"E_GPa", m.youngs_modulus / 1e9},
            {"rho", m.density},
            {"poisson", m.poisson},
        };
        if (m.deposition_temp_c) rec["dep_temp_C"] = *m.deposition_temp_c;
        if (m.conductivity) rec["conductivity"] = *m.conductivity;
        arr.push_back(std::move(rec));
    }
    return arr.dump(2) + "\n";
}

MaterialRegistry::MaterialRegistry() : materials_(builtin_table()) {}

void MaterialRegistry::add(Material m) {
    validate(m);
    m.name = normalized(m.name);
    for (const Material& prev : materials_)
        if (prev.name == m.name)
            raise(errc::duplicate_material, "registry: duplicate material name '" + m.name + "'");
    materials_.push_back(std::move(m));
}

void MaterialRegistry::load_file(const std::string& path) {
    for (Material& m : load_materials(path)) add(std::move(m));
}

const Material& MaterialRegistry::get(std::string_view name) const {
    const std::string key = normalized(name);
    for (const Material& m : materials_)
        if (m.name == key) return m;
    std::string msg = "unknown material '" + std::string(name) + "'; available:";
    for (const Material& m : materials_) msg += " " + m.name;
    raise(errc::unknown_material, msg);
}

std::vector<std::string> MaterialRegistry::names() const {
    std::vector<std::string> out;
    for (const Material& m : materials_) out.push_back(m.name);
    return out;
}

} // namespace mrt
