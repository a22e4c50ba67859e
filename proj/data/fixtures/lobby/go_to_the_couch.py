def execute_command(image):
    image_patch = ImagePatch(image)
    couch_patches = image_patch.find('couch')
    if len(couch_patches) == 0:
        return {'function': 'None', 'error': 'No couch found.'}
    couch = couch_patches[0]
    return {'function': 'navigate_to_object', 'inputs': (couch.horizontal_center, couch.vertical_center), 'box': [couch.left, couch.lower, couch.right, couch.upper]}
