/** Boot: find the mount point and hand over to the wizard. */

import { mountApp } from './wizard.js';

const root = document.getElementById('app');
if (root) {
  mountApp(root);
}
