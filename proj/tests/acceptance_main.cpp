#include "dmc/dmc.hpp"
#include <cstdio>
int main() { std::puts("acceptance: placeholder"); return 0; }
