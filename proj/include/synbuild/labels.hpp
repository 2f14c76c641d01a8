#pragma once

#include <cstdint>

namespace synbuild {

// Room and element label IDs used in floor-plan grids and record semantics.
enum Label : uint8_t {
    kUnset = 0,
    kLivingRoom = 1,
    kMasterRoom = 2,
    kKitchen = 3,
    kBathroom = 4,
    kDiningRoom = 5,
    kChildRoom = 6,
    kStudyRoom = 7,
    kSecondRoom = 8,
    kGuestRoom = 9,
    kBalcony = 10,
    kEntrance = 11,
    kStorage = 12,
    kWallIn = 13,
    kExternal = 14,
    kExteriorWall = 15,
    kInteriorWall = 16,
    kFrontDoor = 17,
    kInteriorDoor = 18,
    kOpenWall = 19,
    kWindow = 20,
    kBalconyDoor = 21,
};

constexpr uint8_t kMaxLabelId = 21;

constexpr bool is_valid_label(int id) { return id >= 0 && id <= kMaxLabelId; }
constexpr bool is_room_label(int id) { return id >= 1 && id <= 13; }
constexpr bool is_door_label(int id) { return id == 17 || id == 18 || id == 21; }
// Structural elements: walls, doors, open walls, windows.
constexpr bool is_structure_label(int id) { return id >= 15 && id <= 21; }

const char* label_name(int id);

}  // namespace synbuild
