// One consistent j=3, m=1, n=5 game, six moves in, as both a service
// snapshot and the equivalent replay document.

import type { Snapshot } from "../src/types.js";

export function fixtureSnapshot(): Snapshot {
  return {
    config: { j: 3, m: 1, n: 5, v: 9, capacity: 3, b_is_minority: false },
    districts: [
      {
        bricks: 2,
        apples: 1,
        placed: [
          { i: 0, player: "B", color: "brick" },
          { i: 1, player: "A", color: "apple" },
          { i: 2, player: "B", color: "brick" },
        ],
      },
      { bricks: 1, apples: 0, placed: [{ i: 3, player: "A", color: "brick" }] },
      {
        bricks: 0,
        apples: 2,
        placed: [
          { i: 4, player: "B", color: "apple" },
          { i: 5, player: "A", color: "apple" },
        ],
      },
    ],
    pools: { bricks: 2, apples: 1 },
    to_move: "B",
    move_count: 6,
    terminal: false,
    outcome: null,
    score: { q: 1, total: 2, u: 2, witness: [0] },
    fairness: { p: 2, E: null },
    bounds: { q: 1, f: "5/3", n_guarantee: 4 },
    legal_moves: [
      { district: 1, color: "brick" },
      { district: 1, color: "apple" },
      { district: 2, color: "brick" },
      { district: 2, color: "apple" },
    ],
    display: {
      row_order: [0, 1, 2],
      outlines: [
        { i: 3, outline: "green" },
        { i: 4, outline: "red" },
      ],
    },
    human_side: "B",
    engine: "crack-majority",
  };
}

export const fixtureReplayText = [
  "cfg j=3 m=1 n=5 b=human a=first-legal ver=0.1.0",
  "mv i=0 p=B d=0 c=brick",
  "mv i=1 p=A d=0 c=apple",
  "mv i=2 p=B d=0 c=brick",
  "mv i=3 p=A d=1 c=brick",
  "mv i=4 p=B d=2 c=apple",
  "mv i=5 p=A d=2 c=apple",
  "",
].join("\n");
