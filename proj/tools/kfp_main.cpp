#include <cstdio>

int main() {
    std::puts("kfp: command-line interface under construction");
    return 0;
}
