// Copyright 2026 The qmeas Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qmeas/canonical_json.hpp"

#include <cmath>
#include <cstdio>

namespace qmeas {

namespace {

void write(const nlohmann::json& j, std::string& out, int depth) {
    const std::string pad(static_cast<std::size_t>(depth + 1) * 2, ' ');
    const std::string close_pad(static_cast<std::size_t>(depth) * 2, ' ');
    switch (j.type()) {
    case nlohmann::json::value_t::object: {
        if (j.empty()) { out += "{}"; return; }
        out += "{\n";
        bool first = true;
        for (const auto& [key, value] : j.items()) {  // std::map order: sorted
            if (!first) out += ",\n";
            first = false;
            out += pad + nlohmann::json(key).dump() + ": ";
            write(value, out, depth + 1);
        }
        out += "\n" + close_pad + "}";
        return;
    }
    case nlohmann::json::value_t::array: {
        if (j.empty()) { out += "[]"; return; }
        // Arrays of scalars stay on one line so that vectors and matrix rows
        // remain readable in diffs.
        bool flat = true;
        for (const auto& e : j) flat = flat && !e.is_structured();
        if (flat) {
            out += "[";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ", ";
                write(j[i], out, depth + 1);
            }
            out += "]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i) out += ",\n";
            out += pad;
            write(j[i], out, depth + 1);
        }
        out += "\n" + close_pad + "]";
        return;
    }
    case nlohmann::json::value_t::number_float: {
        const double x = j.get<double>();
        if (!std::isfinite(x)) { out += "null"; return; }
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", x == 0.0 ? 0.0 : x);  // no "-0"
        out += buf;
        return;
    }
    default:
        out += j.dump();
        return;
    }
}

} // namespace

std::string dump_canonical(const nlohmann::json& j) {
    std::string out;
    write(j, out, 0);
    out += "\n";
    return out;
}

} // namespace qmeas
