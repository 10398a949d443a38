/** Entry point: wire the HTTP client, controller and view together. */

import { HttpApiClient } from './api.js';
import { AnnotationController } from './controller.js';
import { AnnotationView } from './view.js';

function sessionIdFromLocation(): string {
  const params = new URLSearchParams(window.location.search);
  return params.get('session') ?? 'default';
}

const root = document.getElementById('app');
if (!root) {
  throw new Error('missing #app element');
}

const controller = new AnnotationController(new HttpApiClient(), sessionIdFromLocation());
const view = new AnnotationView(root, controller);
view.attachKeyboard(document);
void controller.start();
