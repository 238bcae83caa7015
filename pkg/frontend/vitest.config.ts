import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "node",
    include: ["tests/**/*.test.ts"],
    // integration tests boot the real service, so leave headroom
    testTimeout: 20_000,
    hookTimeout: 40_000,
  },
});
