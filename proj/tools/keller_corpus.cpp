// keller-corpus: writes the bundled fixture maps, an index, and malformed
// files for the parse-error paths into a directory.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "keller/corpus.hpp"
#include "keller/mapfile.hpp"

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + path.string());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Write the fixture corpus"};
    std::string dir = "corpus";
    app.add_option("dir", dir, "Output directory")->required();
    CLI11_PARSE(app, argc, argv);

    try {
        std::filesystem::create_directories(dir);
        const std::filesystem::path root(dir);
        nlohmann::ordered_json index = nlohmann::ordered_json::array();
        for (const auto& f : keller::corpus::standard_corpus()) {
            keller::mapfile::write_file((root / (f.name + ".json")).string(), f.map);
            index.push_back({{"name", f.name},
                             {"family", keller::corpus::to_string(f.family)},
                             {"keller", f.keller},
                             {"triangular", f.triangular},
                             {"n", f.map.n()},
                             {"d", f.map.d()}});
        }
        // Exponent list one entry short, at line 4.
        write_text(root / "malformed_exps.json",
                   "{\n  \"components\": [\n    [\n      {\"coeff\": \"1\", \"exps\": [2]}\n    ],\n    []\n  ],\n"
                   "  \"d\": 2,\n  \"n\": 2\n}\n");
        // Unterminated array.
        write_text(root / "malformed_syntax.json", "{\n  \"components\": [\n    [\n  ],\n  \"d\": 2\n");
        index.push_back({{"name", "malformed_exps"}, {"family", "malformed"}});
        index.push_back({{"name", "malformed_syntax"}, {"family", "malformed"}});
        write_text(root / "index.json", index.dump(2) + "\n");
        std::cout << "wrote " << index.size() << " files to " << dir << '\n';
    } catch (const std::exception& e) {
        std::cerr << "keller-corpus: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
