#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "jointvol/mixture.hpp"
#include "jointvol/monte_carlo.hpp"

namespace jointvol {

// Mixture schema: {"spot": s, "tau": t, "states": [{"p":..., "sigma":..., "r":...}]}
inline MixtureModel mixture_from_json(const nlohmann::json& j) {
    MixtureModel model;
    model.spot = j.at("spot").get<double>();
    model.tau = j.at("tau").get<double>();
    for (const nlohmann::json& s : j.at("states"))
        model.states.push_back(MixtureState{s.at("p").get<double>(),
                                            s.at("sigma").get<double>(),
                                            s.at("r").get<double>()});
    model.validate();
    return model;
}

inline nlohmann::json to_json(const MixtureModel& model) {
    nlohmann::json states = nlohmann::json::array();
    for (const MixtureState& s : model.states)
        states.push_back({{"p", s.weight}, {"sigma", s.sigma}, {"r", s.rate}});
    return {{"spot", model.spot}, {"tau", model.tau}, {"states", states}};
}

// Path-spec schema: {"spot": s, "segments": [{"dt":..., "sigma":..., "r":...}]}
inline PathSpec path_spec_from_json(const nlohmann::json& j) {
    PathSpec spec;
    spec.spot = j.at("spot").get<double>();
    for (const nlohmann::json& s : j.at("segments"))
        spec.segments.push_back(PathSegment{s.at("dt").get<double>(),
                                            s.at("sigma").get<double>(),
                                            s.at("r").get<double>()});
    spec.validate();
    return spec;
}

inline nlohmann::json to_json(const PathSpec& spec) {
    nlohmann::json segments = nlohmann::json::array();
    for (const PathSegment& s : spec.segments)
        segments.push_back({{"dt", s.dt}, {"sigma", s.sigma}, {"r", s.rate}});
    return {{"spot", spec.spot}, {"segments", segments}};
}

inline nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    nlohmann::json j;
    in >> j;
    return j;
}

} // namespace jointvol
