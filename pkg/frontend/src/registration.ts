/** Single-screen registration flow.
 *
 * The user works through one scrollable list of bootstrapped faces: tapping
 * toggles membership in the 45-image library, a second affordance on each
 * selected face adds it to (or removes it from) the ordered 4-image secret.
 * The completion control is enabled exactly when 45 faces are selected and
 * 4 of them are ordered as the secret.
 */

import { LIBRARY_SIZE, SECRET_SIZE } from "./types.js";

export interface RegistrationPayload {
  image_ids: string[];
  secret: string[];
}

export class RegistrationFlow {
  private readonly availableIds: Set<string>;
  private selected: string[] = [];
  private secret: string[] = [];
  /** Service-side validation message, surfaced inline next to the control. */
  lastError: string | null = null;

  constructor(available: string[]) {
    this.availableIds = new Set(available);
    if (this.availableIds.size !== available.length) {
      throw new Error("bootstrap face list contains duplicates");
    }
  }

  get selectionCount(): number {
    return this.selected.length;
  }

  get secretCount(): number {
    return this.secret.length;
  }

  isSelected(imageId: string): boolean {
    return this.selected.includes(imageId);
  }

  /** 1-based badge shown on secret members, null for everything else. */
  secretPosition(imageId: string): number | null {
    const at = this.secret.indexOf(imageId);
    return at === -1 ? null : at + 1;
  }

  /** Toggle library membership. Returns false when refused (unknown face or
   * already at 45 and trying to add). Deselecting a secret member also
   * vacates its secret slot; later members renumber automatically. */
  toggleSelect(imageId: string): boolean {
    if (!this.availableIds.has(imageId)) {
      return false;
    }
    const at = this.selected.indexOf(imageId);
    if (at !== -1) {
      this.selected.splice(at, 1);
      const secretAt = this.secret.indexOf(imageId);
      if (secretAt !== -1) {
        this.secret.splice(secretAt, 1);
      }
      return true;
    }
    if (this.selected.length >= LIBRARY_SIZE) {
      return false;
    }
    this.selected.push(imageId);
    return true;
  }

  /** Toggle secret membership; order of addition is the secret order.
   * Only selected faces qualify and the secret holds at most 4. */
  toggleSecret(imageId: string): boolean {
    if (!this.isSelected(imageId)) {
      return false;
    }
    const at = this.secret.indexOf(imageId);
    if (at !== -1) {
      this.secret.splice(at, 1);
      return true;
    }
    if (this.secret.length >= SECRET_SIZE) {
      return false;
    }
    this.secret.push(imageId);
    return true;
  }

  /** The completion control is enabled iff this is true. */
  get complete(): boolean {
    return this.selected.length === LIBRARY_SIZE && this.secret.length === SECRET_SIZE;
  }

  payload(): RegistrationPayload {
    if (!this.complete) {
      throw new Error(
        `registration incomplete: ${this.selected.length}/${LIBRARY_SIZE} selected, ` +
          `${this.secret.length}/${SECRET_SIZE} secret`
      );
    }
    return { image_ids: [...this.selected], secret: [...this.secret] };
  }
}
