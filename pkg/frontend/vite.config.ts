import { defineConfig } from "vitest/config";

export default defineConfig({
  server: { port: 5173 },
  test: {
    environment: "jsdom",
    globalSetup: "./tests/setup-service.ts",
    testTimeout: 20000,
    hookTimeout: 30000,
  },
});
