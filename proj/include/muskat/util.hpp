#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace muskat {

// Thread cap comes from MUSKAT_LAB_THREADS (>=1); defaults to hardware concurrency.
int max_threads();

// Deterministic parallel loop: body(i) writes only data owned by index i.
void parallel_for(std::size_t begin, std::size_t end, const std::function<void(std::size_t)>& body);

// Git-style content hash: sha1("blob <len>\0" + payload), hex-encoded.
std::string git_blob_sha1(const std::string& payload);

std::string sha1_hex(const void* data, std::size_t len);

}  // namespace muskat
