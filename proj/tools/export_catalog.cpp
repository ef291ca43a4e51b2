// Writes the built-in catalog as algebra files, one per entry.
#include <filesystem>
#include <fstream>
#include <iostream>

#include "lie/algebra_file.hpp"

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: export_catalog DIR\n";
        return 2;
    }
    std::filesystem::path dir(argv[1]);
    std::filesystem::create_directories(dir);
    for (auto& e : lie::builtin_entries()) {
        std::ofstream out(dir / (e.id + ".alg"));
        out << lie::write_algebra_file(e);
        if (!out) {
            std::cerr << "cannot write " << (dir / (e.id + ".alg")).string() << "\n";
            return 1;
        }
    }
    return 0;
}
