// Test helper: `bytes_tool cut <in> <out> <n>` keeps the first n bytes,
// `bytes_tool flip <in> <out> <offset>` inverts one byte.
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

int main(int argc, char **argv) {
    if (argc != 5)
        return 2;
    std::ifstream in(argv[2], std::ios::binary);
    std::vector<char> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const std::size_t n = std::strtoull(argv[4], nullptr, 10);
    const std::string op = argv[1];
    if (op == "cut" && n <= data.size())
        data.resize(n);
    else if (op == "flip" && n < data.size())
        data[n] = static_cast<char>(~data[n]);
    else
        return 2;
    std::ofstream out(argv[3], std::ios::binary);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    return out ? 0 : 1;
}
