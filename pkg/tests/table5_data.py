"""Recorded per-object pick-and-place outcomes of six grasping frameworks
(near-to-far and fixed grasping orders), used to pin results aggregation.

Each entry is (successes, perception failures, planning failures, execution
failures) for one object under one method.  Four success entries in the
source release were inconsistent with the per-object attempt counts and the
published totals; they are reconciled here to the unique values satisfying
both (near-to-far method 6: mug 3->2, large marker 2->1; fixed method 4:
mustard bottle 1->2; fixed method 6: potted meat can 4->3).
"""

OBJECT_COUNTS = {
    "003_cracker_box": 6,
    "004_sugar_box": 5,
    "005_tomato_soup_can": 7,
    "006_mustard_bottle": 7,
    "007_tuna_fish_can": 6,
    "008_pudding_box": 5,
    "009_gelatin_box": 7,
    "010_potted_meat_can": 7,
    "011_banana": 7,
    "021_bleach_cleanser": 5,
    "024_bowl": 7,
    "025_mug": 5,
    "037_scissors": 7,
    "035_power_drill": 7,
    "040_large_marker": 6,
    "052_extra_large_clamp": 6,
}

NEAR_TO_FAR = {
    1: {
        "003_cracker_box": (5, 0, 1, 0),
        "004_sugar_box": (5, 0, 0, 0),
        "005_tomato_soup_can": (6, 1, 0, 0),
        "006_mustard_bottle": (6, 1, 0, 0),
        "007_tuna_fish_can": (1, 1, 4, 0),
        "008_pudding_box": (5, 0, 0, 0),
        "009_gelatin_box": (3, 4, 0, 0),
        "010_potted_meat_can": (6, 1, 0, 0),
        "011_banana": (4, 0, 2, 1),
        "021_bleach_cleanser": (3, 0, 1, 1),
        "024_bowl": (2, 4, 1, 0),
        "025_mug": (2, 1, 0, 2),
        "037_scissors": (1, 2, 4, 0),
        "035_power_drill": (2, 1, 3, 1),
        "040_large_marker": (1, 4, 1, 0),
        "052_extra_large_clamp": (6, 0, 0, 0),
    },
    2: {
        "003_cracker_box": (1, 3, 1, 1),
        "004_sugar_box": (1, 4, 0, 0),
        "005_tomato_soup_can": (6, 1, 0, 0),
        "006_mustard_bottle": (3, 2, 2, 0),
        "007_tuna_fish_can": (3, 2, 1, 0),
        "008_pudding_box": (4, 1, 0, 0),
        "009_gelatin_box": (2, 4, 1, 0),
        "010_potted_meat_can": (3, 2, 2, 0),
        "011_banana": (3, 3, 1, 0),
        "021_bleach_cleanser": (1, 1, 2, 1),
        "024_bowl": (5, 2, 0, 0),
        "025_mug": (3, 2, 0, 0),
        "037_scissors": (1, 3, 3, 0),
        "035_power_drill": (3, 2, 2, 0),
        "040_large_marker": (4, 1, 1, 0),
        "052_extra_large_clamp": (5, 1, 0, 0),
    },
    3: {
        "003_cracker_box": (2, 2, 2, 0),
        "004_sugar_box": (2, 2, 1, 0),
        "005_tomato_soup_can": (3, 0, 4, 0),
        "006_mustard_bottle": (2, 1, 4, 0),
        "007_tuna_fish_can": (6, 0, 0, 0),
        "008_pudding_box": (3, 0, 2, 0),
        "009_gelatin_box": (3, 2, 1, 1),
        "010_potted_meat_can": (4, 1, 2, 0),
        "011_banana": (1, 0, 6, 0),
        "021_bleach_cleanser": (2, 1, 1, 1),
        "024_bowl": (5, 0, 2, 0),
        "025_mug": (3, 1, 1, 0),
        "037_scissors": (1, 0, 5, 1),
        "035_power_drill": (0, 7, 0, 0),
        "040_large_marker": (3, 1, 2, 0),
        "052_extra_large_clamp": (3, 0, 3, 0),
    },
    4: {
        "003_cracker_box": (3, 1, 2, 0),
        "004_sugar_box": (5, 0, 0, 0),
        "005_tomato_soup_can": (6, 0, 1, 0),
        "006_mustard_bottle": (5, 1, 1, 0),
        "007_tuna_fish_can": (5, 1, 0, 0),
        "008_pudding_box": (4, 0, 1, 0),
        "009_gelatin_box": (7, 0, 0, 0),
        "010_potted_meat_can": (3, 2, 1, 1),
        "011_banana": (2, 0, 5, 0),
        "021_bleach_cleanser": (2, 0, 2, 1),
        "024_bowl": (7, 0, 0, 0),
        "025_mug": (1, 1, 3, 0),
        "037_scissors": (3, 2, 2, 0),
        "035_power_drill": (2, 4, 0, 1),
        "040_large_marker": (1, 2, 3, 0),
        "052_extra_large_clamp": (4, 1, 1, 0),
    },
    5: {
        "003_cracker_box": (2, 3, 1, 0),
        "004_sugar_box": (3, 1, 1, 0),
        "005_tomato_soup_can": (2, 0, 5, 0),
        "006_mustard_bottle": (1, 0, 5, 1),
        "007_tuna_fish_can": (5, 0, 1, 0),
        "008_pudding_box": (4, 0, 1, 0),
        "009_gelatin_box": (4, 0, 3, 0),
        "010_potted_meat_can": (1, 0, 6, 0),
        "011_banana": (5, 0, 2, 0),
        "021_bleach_cleanser": (0, 1, 3, 1),
        "024_bowl": (5, 0, 1, 1),
        "025_mug": (2, 0, 3, 0),
        "037_scissors": (0, 2, 5, 0),
        "035_power_drill": (1, 3, 3, 0),
        "040_large_marker": (3, 0, 3, 0),
        "052_extra_large_clamp": (0, 1, 5, 0),
    },
    6: {
        "003_cracker_box": (4, 1, 0, 1),
        "004_sugar_box": (5, 0, 0, 0),
        "005_tomato_soup_can": (2, 2, 3, 0),
        "006_mustard_bottle": (6, 0, 1, 0),
        "007_tuna_fish_can": (5, 1, 0, 0),
        "008_pudding_box": (4, 1, 0, 0),
        "009_gelatin_box": (6, 0, 1, 0),
        "010_potted_meat_can": (5, 2, 0, 0),
        "011_banana": (6, 0, 0, 1),
        "021_bleach_cleanser": (0, 1, 2, 2),
        "024_bowl": (6, 0, 0, 1),
        "025_mug": (2, 0, 2, 1),
        "037_scissors": (0, 2, 2, 3),
        "035_power_drill": (3, 3, 0, 1),
        "040_large_marker": (1, 2, 2, 1),
        "052_extra_large_clamp": (2, 1, 2, 1),
    },
}

FIXED = {
    1: {
        "003_cracker_box": (5, 1, 0, 0),
        "004_sugar_box": (4, 1, 0, 0),
        "005_tomato_soup_can": (7, 0, 0, 0),
        "006_mustard_bottle": (7, 0, 0, 0),
        "007_tuna_fish_can": (2, 4, 0, 0),
        "008_pudding_box": (4, 0, 1, 0),
        "009_gelatin_box": (1, 6, 0, 0),
        "010_potted_meat_can": (7, 0, 0, 0),
        "011_banana": (2, 1, 4, 0),
        "021_bleach_cleanser": (3, 2, 0, 0),
        "024_bowl": (4, 3, 0, 0),
        "025_mug": (5, 0, 0, 0),
        "037_scissors": (0, 1, 6, 0),
        "035_power_drill": (2, 1, 4, 0),
        "040_large_marker": (0, 5, 1, 0),
        "052_extra_large_clamp": (6, 0, 0, 0),
    },
    2: {
        "003_cracker_box": (2, 4, 0, 0),
        "004_sugar_box": (0, 4, 1, 0),
        "005_tomato_soup_can": (5, 2, 0, 0),
        "006_mustard_bottle": (2, 4, 1, 0),
        "007_tuna_fish_can": (1, 5, 0, 0),
        "008_pudding_box": (3, 1, 1, 0),
        "009_gelatin_box": (3, 4, 0, 0),
        "010_potted_meat_can": (4, 1, 2, 0),
        "011_banana": (2, 4, 1, 0),
        "021_bleach_cleanser": (1, 3, 1, 0),
        "024_bowl": (2, 3, 2, 0),
        "025_mug": (3, 2, 0, 0),
        "037_scissors": (1, 3, 2, 1),
        "035_power_drill": (2, 2, 3, 0),
        "040_large_marker": (2, 4, 0, 0),
        "052_extra_large_clamp": (5, 1, 0, 0),
    },
    3: {
        "003_cracker_box": (3, 2, 1, 0),
        "004_sugar_box": (2, 0, 3, 0),
        "005_tomato_soup_can": (1, 1, 5, 0),
        "006_mustard_bottle": (2, 2, 2, 1),
        "007_tuna_fish_can": (5, 1, 0, 0),
        "008_pudding_box": (3, 0, 2, 0),
        "009_gelatin_box": (4, 0, 2, 1),
        "010_potted_meat_can": (2, 2, 2, 1),
        "011_banana": (4, 1, 2, 0),
        "021_bleach_cleanser": (2, 0, 2, 1),
        "024_bowl": (4, 1, 2, 0),
        "025_mug": (4, 0, 1, 0),
        "037_scissors": (1, 2, 4, 0),
        "035_power_drill": (0, 6, 0, 1),
        "040_large_marker": (0, 1, 5, 0),
        "052_extra_large_clamp": (2, 0, 4, 0),
    },
    4: {
        "003_cracker_box": (4, 1, 1, 0),
        "004_sugar_box": (3, 0, 2, 0),
        "005_tomato_soup_can": (6, 1, 0, 0),
        "006_mustard_bottle": (2, 1, 3, 1),
        "007_tuna_fish_can": (4, 1, 1, 0),
        "008_pudding_box": (4, 1, 0, 0),
        "009_gelatin_box": (7, 0, 0, 0),
        "010_potted_meat_can": (6, 1, 0, 0),
        "011_banana": (1, 0, 6, 0),
        "021_bleach_cleanser": (1, 1, 2, 1),
        "024_bowl": (7, 0, 0, 0),
        "025_mug": (4, 0, 0, 1),
        "037_scissors": (2, 2, 3, 0),
        "035_power_drill": (3, 4, 0, 0),
        "040_large_marker": (3, 2, 1, 0),
        "052_extra_large_clamp": (3, 2, 1, 0),
    },
    5: {
        "003_cracker_box": (3, 2, 1, 0),
        "004_sugar_box": (3, 1, 1, 0),
        "005_tomato_soup_can": (1, 0, 5, 1),
        "006_mustard_bottle": (0, 0, 6, 1),
        "007_tuna_fish_can": (2, 1, 3, 0),
        "008_pudding_box": (4, 0, 1, 0),
        "009_gelatin_box": (4, 1, 2, 0),
        "010_potted_meat_can": (4, 1, 2, 0),
        "011_banana": (3, 1, 2, 1),
        "021_bleach_cleanser": (1, 1, 3, 0),
        "024_bowl": (4, 0, 2, 1),
        "025_mug": (2, 1, 2, 0),
        "037_scissors": (2, 2, 3, 0),
        "035_power_drill": (0, 3, 3, 1),
        "040_large_marker": (2, 1, 3, 0),
        "052_extra_large_clamp": (1, 0, 5, 0),
    },
    6: {
        "003_cracker_box": (4, 1, 1, 0),
        "004_sugar_box": (5, 0, 0, 0),
        "005_tomato_soup_can": (7, 0, 0, 0),
        "006_mustard_bottle": (3, 0, 1, 3),
        "007_tuna_fish_can": (4, 1, 0, 1),
        "008_pudding_box": (4, 0, 0, 1),
        "009_gelatin_box": (6, 0, 1, 0),
        "010_potted_meat_can": (3, 0, 2, 2),
        "011_banana": (5, 1, 1, 0),
        "021_bleach_cleanser": (1, 0, 2, 2),
        "024_bowl": (7, 0, 0, 0),
        "025_mug": (2, 0, 3, 0),
        "037_scissors": (2, 4, 1, 0),
        "035_power_drill": (4, 1, 1, 1),
        "040_large_marker": (2, 4, 0, 0),
        "052_extra_large_clamp": (2, 2, 2, 0),
    },
}

ALL_ROWS = {
    "near-to-far": {
        1: (58, 20, 17, 5),
        2: (48, 34, 16, 2),
        3: (43, 18, 36, 3),
        4: (60, 15, 22, 3),
        5: (38, 11, 48, 3),
        6: (57, 16, 15, 12),
    },
    "fixed": {
        1: (59, 25, 16, 0),
        2: (38, 47, 14, 1),
        3: (39, 19, 37, 5),
        4: (60, 17, 20, 3),
        5: (36, 15, 44, 5),
        6: (61, 14, 15, 10),
    },
}
