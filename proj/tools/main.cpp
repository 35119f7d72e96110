#include <cstdio>
int main() { std::puts("qscramble placeholder"); return 0; }
