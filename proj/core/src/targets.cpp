#include "coverplan/targets.hpp"

#include <filesystem>
#include <sstream>

#include "coverplan/errors.hpp"

namespace coverplan {

namespace {

std::pair<double, int> parse_sphere_args(const std::string& args) {
    double radius = 10.0;
    int triangles = 960;
    std::istringstream in(args);
    std::string field;
    while (std::getline(in, field, ',')) {
        const auto eq = field.find('=');
        if (eq == std::string::npos)
            throw InvalidInputError("bad sphere parameter '" + field + "'");
        const std::string key = field.substr(0, eq);
        const std::string value = field.substr(eq + 1);
        try {
            if (key == "r" || key == "radius") radius = std::stod(value);
            else if (key == "tris" || key == "triangles") triangles = std::stoi(value);
            else throw InvalidInputError("unknown sphere parameter '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw InvalidInputError("bad sphere value '" + value + "'");
        }
    }
    return {radius, triangles};
}

}  // namespace

TargetInfo make_target(const std::string& spec) {
    TargetInfo info;
    if (spec == "sphere" || spec.rfind("sphere:", 0) == 0) {
        const auto [radius, triangles] =
            parse_sphere_args(spec.size() > 7 ? spec.substr(7) : std::string{});
        info.mesh = generate_sphere(radius, triangles);
        std::ostringstream name;
        name << "sphere:r=" << radius << ",tris=" << triangles;
        info.canonical = name.str();
        return info;
    }
    if (spec == "nested-box" || spec == "channel-block") {
        auto target = generate_occluded_target(spec == "nested-box" ? OccludedStyle::NestedBox
                                                                    : OccludedStyle::ChannelBlock);
        info.mesh = std::move(target.mesh);
        info.hidden_area_fraction = target.hidden_area_fraction;
        info.hidden_ids = std::move(target.hidden_ids);
        info.canonical = spec;
        return info;
    }
    if (!std::filesystem::exists(spec))
        throw InvalidInputError("target '" + spec + "' is neither a generator spec nor a file");
    info.mesh = load_mesh(spec, detect_mesh_format(spec));
    info.canonical = spec;
    return info;
}

}  // namespace coverplan
