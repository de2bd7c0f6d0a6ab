"use strict";
/**
 * Pure helpers shared by the extension entry point and the tests.
 *
 * The client deliberately contains no language logic: it only knows how to
 * find the server binary and what to tell the user when it is missing.
 */
Object.defineProperty(exports, "__esModule", { value: true });
exports.DEFAULT_SERVER_PATH = void 0;
exports.serverCommand = serverCommand;
exports.missingServerMessage = missingServerMessage;
exports.DEFAULT_SERVER_PATH = "coolio";
/** Build the spawn invocation for a configured executable path. */
function serverCommand(configuredPath) {
    const command = configuredPath && configuredPath.trim().length > 0
        ? configuredPath.trim()
        : exports.DEFAULT_SERVER_PATH;
    return { command, args: ["lsp"] };
}
/** User-visible message when the server executable cannot be started. */
function missingServerMessage(configuredPath) {
    return (`Could not start the COOL language server: "${configuredPath}" was not ` +
        `found. Install the coolio package or point the coolio.serverPath ` +
        `setting at the executable.`);
}
//# sourceMappingURL=config.js.map