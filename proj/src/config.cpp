#include "mfd/config.hpp"

#include "mfd/error.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace mfd {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    size_t e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& s, const std::string& key) {
    T v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        fail("ParseError", "bad value '" + s + "' for config key " + key);
    return v;
}

std::string fmt(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, end);
}

} // namespace

void RunConfig::apply(const std::string& key, const std::string& value) {
    if (key == "sigma") sigma = parse_number<double>(value, key);
    else if (key == "r_max") r_max = parse_number<double>(value, key);
    else if (key == "grid_len") grid_len = parse_number<uint32_t>(value, key);
    else if (key == "feature_len") feature_len = parse_number<uint32_t>(value, key);
    else if (key == "binarize_threshold") binarize_threshold = parse_number<int>(value, key);
    else if (key == "svm_c") svm_c = parse_number<double>(value, key);
    else if (key == "folds") folds = parse_number<int>(value, key);
    else if (key == "runs") runs = parse_number<int>(value, key);
    else if (key == "seed") seed = parse_number<uint64_t>(value, key);
    else if (key == "threads") threads = parse_number<int>(value, key);
    else fail("BadConfigKey", "unknown config key '" + key + "'");
}

void RunConfig::apply_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail("IoError", "cannot open config file " + path.string());

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            fail("ParseError", path.string() + ":" + std::to_string(line_no) +
                                   ": expected key=value");
        apply(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
    }
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
    RunConfig cfg;
    cfg.apply_file(path);
    return cfg;
}

void RunConfig::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) fail("IoError", "cannot open " + path.string() + " for writing");
    out << "sigma=" << fmt(sigma) << "\n"
        << "r_max=" << fmt(r_max) << "\n"
        << "grid_len=" << grid_len << "\n"
        << "feature_len=" << feature_len << "\n"
        << "binarize_threshold=" << binarize_threshold << "\n"
        << "svm_c=" << fmt(svm_c) << "\n"
        << "folds=" << folds << "\n"
        << "runs=" << runs << "\n"
        << "seed=" << seed << "\n"
        << "threads=" << threads << "\n";
    if (!out) fail("IoError", "short write to " + path.string());
}

} // namespace mfd
