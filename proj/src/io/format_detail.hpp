#pragma once

#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "eit/error.hpp"

namespace eit::detail {

inline std::map<std::string, std::string> read_header(std::istream& in, const char* magic) {
    std::string line;
    if (!std::getline(in, line) || line != magic) {
        throw FormatError(std::string("missing '") + magic + "' header");
    }
    std::map<std::string, std::string> kv;
    while (std::getline(in, line)) {
        if (line == "end_header") return kv;
        std::istringstream s(line);
        std::string key, value;
        if (!(s >> key >> value)) throw FormatError("malformed header line '" + line + "'");
        kv[key] = value;
    }
    throw FormatError("header is not terminated by end_header");
}

inline const std::string& field(const std::map<std::string, std::string>& kv, const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw FormatError("header field '" + key + "' is missing");
    return it->second;
}

inline double number(const std::map<std::string, std::string>& kv, const std::string& key) {
    try {
        return std::stod(field(kv, key));
    } catch (const std::logic_error&) {
        throw FormatError("header field '" + key + "' is not a number");
    }
}

inline std::vector<unsigned char> read_payload(std::istream& in, std::size_t bytes) {
    std::vector<unsigned char> buf(bytes);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(bytes));
    if (static_cast<std::size_t>(in.gcount()) != bytes) throw FormatError("payload is truncated");
    return buf;
}

}  // namespace eit::detail

