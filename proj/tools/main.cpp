#include <cstdio>

int main() {
    std::puts("meshcsg: CLI not wired up yet");
    return 1;
}
