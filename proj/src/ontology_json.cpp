#include "ontic/ontology_json.hpp"

#include <fstream>

#include "ontic/error.hpp"

namespace ontic::ontology {

namespace {

using nlohmann::json;

const json& member(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key))
        throw Error(ErrorKind::InvalidModel, where + ": missing \"" + key + "\"");
    return obj.at(key);
}

std::vector<double> numbers(const json& arr, const std::string& where) {
    if (!arr.is_array()) throw Error(ErrorKind::InvalidModel, where + ": expected an array of numbers");
    std::vector<double> out;
    out.reserve(arr.size());
    for (const auto& v : arr) {
        if (!v.is_number()) throw Error(ErrorKind::InvalidModel, where + ": expected numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

std::vector<std::string> strings(const json& arr, const std::string& where) {
    if (!arr.is_array()) throw Error(ErrorKind::InvalidModel, where + ": expected an array of strings");
    std::vector<std::string> out;
    for (const auto& v : arr) {
        if (!v.is_string()) throw Error(ErrorKind::InvalidModel, where + ": expected strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

std::string name_of(const json& obj, const std::string& where) {
    const auto& n = member(obj, "name", where);
    if (!n.is_string()) throw Error(ErrorKind::InvalidModel, where + ": name must be a string");
    return n.get<std::string>();
}

}  // namespace

OntModel model_from_json(const json& j) {
    if (!j.is_object()) throw Error(ErrorKind::InvalidModel, "model must be a JSON object");
    OntModel model;
    model.lambda.labels = strings(member(j, "lambda", "model"), "lambda");

    const auto& preps = member(j, "preparations", "model");
    if (!preps.is_array()) throw Error(ErrorKind::InvalidModel, "preparations must be an array");
    for (const auto& p : preps) {
        const std::string name = name_of(p, "preparation");
        model.preparations.push_back({name, numbers(member(p, "mu", name), name + ".mu")});
    }

    const auto& meas = member(j, "measurements", "model");
    if (!meas.is_array()) throw Error(ErrorKind::InvalidModel, "measurements must be an array");
    for (const auto& m : meas) {
        ResponseFunction rf;
        rf.name = name_of(m, "measurement");
        rf.outcomes = strings(member(m, "outcomes", rf.name), rf.name + ".outcomes");
        const auto& xi = member(m, "xi", rf.name);
        if (!xi.is_array()) throw Error(ErrorKind::InvalidModel, rf.name + ".xi must be an array of rows");
        for (const auto& row : xi) rf.xi.push_back(numbers(row, rf.name + ".xi"));
        model.measurements.push_back(std::move(rf));
    }

    if (j.contains("born_targets") && !j.at("born_targets").is_null()) {
        const auto& bt = j.at("born_targets");
        if (!bt.is_object()) throw Error(ErrorKind::InvalidModel, "born_targets must be an object");
        BornTargets targets;
        for (const auto& [prep, by_meas] : bt.items()) {
            if (!by_meas.is_object())
                throw Error(ErrorKind::InvalidModel, "born_targets." + prep + " must be an object");
            for (const auto& [mname, probs] : by_meas.items())
                targets[prep][mname] = numbers(probs, "born_targets." + prep + "." + mname);
        }
        model.born_targets = std::move(targets);
    }
    return model;
}

json to_json(const OntModel& model) {
    json j;
    j["lambda"] = model.lambda.labels;
    j["preparations"] = json::array();
    for (const auto& p : model.preparations) j["preparations"].push_back({{"name", p.name}, {"mu", p.mu}});
    j["measurements"] = json::array();
    for (const auto& m : model.measurements)
        j["measurements"].push_back({{"name", m.name}, {"outcomes", m.outcomes}, {"xi", m.xi}});
    if (model.born_targets) {
        json bt = json::object();
        for (const auto& [prep, by_meas] : *model.born_targets)
            for (const auto& [mname, probs] : by_meas) bt[prep][mname] = probs;
        j["born_targets"] = std::move(bt);
    }
    return j;
}

OntModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidModel, "cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::InvalidModel, path.string() + ": " + e.what());
    }
    return model_from_json(j);
}

json to_json(const ValidationReport& report) {
    json issues = json::array();
    for (const auto& i : report.issues) {
        issues.push_back({{"code", i.code},
                          {"location", i.location},
                          {"value", i.value},
                          {"deviation", i.deviation},
                          {"message", i.message}});
    }
    return {{"valid", report.ok()}, {"issues", std::move(issues)}};
}

json to_json(const OverlapReport& report) {
    return {{"class", to_string(report.overlap_class)},
            {"omega", report.overlap_mass},
            {"common_support", report.common_support_labels}};
}

}  // namespace ontic::ontology
