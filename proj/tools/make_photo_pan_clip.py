#!/usr/bin/env python3
# Copyright 2026 The tplcodec Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Builds testdata/camera_pan_qcif.y4m from scikit-image sample photographs.

A slow sub-pixel camera pan over camera.png, a coin cut from coins.png
moving across the scene and mild sensor noise. 4:2:0 with flat chroma.
"""

import argparse
import pathlib

import numpy as np
from scipy import ndimage
from skimage import data

WIDTH, HEIGHT, FRAMES = 176, 144, 33


def render(frames: int, seed: int) -> list[np.ndarray]:
    scene = data.camera().astype(np.float64)
    coins = data.coins().astype(np.float64)
    patch = coins[5:45, 15:55]
    mask = np.clip((18.5 - np.hypot(*np.mgrid[-19.5:20.5, -19.5:20.5])) / 1.5, 0.0, 1.0)
    rng = np.random.default_rng(seed)

    out = []
    for n in range(frames):
        x0 = 150.0 + 0.75 * n
        y0 = 120.0 + 0.35 * n + 2.0 * np.sin(n / 6.0)
        yy, xx = np.mgrid[0:HEIGHT, 0:WIDTH].astype(np.float64)
        frame = ndimage.map_coordinates(scene, [yy + y0, xx + x0], order=1, mode="nearest")
        px = int(round(10 + 3.2 * n))
        py = int(round(70 - 1.1 * n))
        region = frame[py:py + 40, px:px + 40]
        m = mask[: region.shape[0], : region.shape[1]]
        region[:] = m * patch[: region.shape[0], : region.shape[1]] + (1 - m) * region
        frame += rng.normal(0.0, 1.5, frame.shape)
        out.append(np.clip(np.rint(frame), 0, 255).astype(np.uint8))
    return out


def write_y4m(path: pathlib.Path, frames: list[np.ndarray]) -> None:
    chroma = np.full((HEIGHT // 2) * (WIDTH // 2) * 2, 128, dtype=np.uint8).tobytes()
    with open(path, "wb") as f:
        f.write(f"YUV4MPEG2 W{WIDTH} H{HEIGHT} F30:1 Ip A1:1 C420jpeg\n".encode())
        for y in frames:
            f.write(b"FRAME\n")
            f.write(y.tobytes())
            f.write(chroma)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=pathlib.Path,
                        default=pathlib.Path(__file__).resolve().parent.parent
                        / "testdata" / "camera_pan_qcif.y4m")
    parser.add_argument("--frames", type=int, default=FRAMES)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()
    args.out.parent.mkdir(parents=True, exist_ok=True)
    write_y4m(args.out, render(args.frames, args.seed))


if __name__ == "__main__":
    main()
