#include "qmlab/fn_io.hpp"

#include <fstream>
#include <istream>

#include <json.hpp>

#include "qmlab/errors.hpp"

namespace qm::io {

using nlohmann::json;

pwl::PiecewiseLinearFn read_function(std::istream& in) {
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("function JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("breakpoints") || !doc.contains("values")) {
        throw InputError("function JSON: expected an object with 'breakpoints' and 'values'");
    }
    auto numbers = [&](const char* key) {
        const auto& arr = doc.at(key);
        if (!arr.is_array()) throw InputError(std::string("function JSON: '") + key + "' is not an array");
        std::vector<double> out;
        out.reserve(arr.size());
        for (const auto& v : arr) {
            if (!v.is_number()) throw InputError(std::string("function JSON: non-numeric entry in '") + key + "'");
            out.push_back(v.get<double>());
        }
        return out;
    };
    return {numbers("breakpoints"), numbers("values")};
}

pwl::PiecewiseLinearFn read_function_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    return read_function(in);
}

std::string function_to_json(const pwl::PiecewiseLinearFn& f) {
    json doc;
    doc["breakpoints"] = std::vector<double>(f.breakpoints().begin(), f.breakpoints().end());
    doc["values"] = std::vector<double>(f.values().begin(), f.values().end());
    return doc.dump();
}

void write_function_file(const pwl::PiecewiseLinearFn& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << function_to_json(f) << '\n';
}

}  // namespace qm::io
